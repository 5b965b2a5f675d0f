#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace sinr::detail {

std::vector<std::string> split_row(const std::string& line);
// Next non-blank line with any trailing CR removed.
bool next_row(std::istream& is, std::string& line);
double parse_double(const std::string& s, const std::string& what);
std::uint64_t parse_uint(const std::string& s, const std::string& what);
std::ofstream open_out(const std::filesystem::path& path);
std::ifstream open_in(const std::filesystem::path& path);
void finish(std::ofstream& os, const std::filesystem::path& path);

}  // namespace sinr::detail
