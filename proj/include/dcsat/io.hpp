#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace dcsat::io {

// Shortest round-trip decimal via std::to_chars; locale independent, so the
// same bits always produce the same bytes.
std::string dtos(double x);
double stod_strict(const std::string& s); // throws on trailing garbage

// Flat key=value config text. '#' starts a comment, blank lines ignored.
std::map<std::string, std::string> parse_config(const std::string& text);
std::map<std::string, std::string> load_config_file(const std::string& path);

// FNV-1a 64 over the file bytes, hex encoded; used for manifest content hashes.
std::string content_hash_file(const std::string& path);

std::string read_file(const std::string& path); // throws naming the path
// write to <path>.tmp then rename, so readers never see partial files
void atomic_write_file(const std::string& path, const std::string& content);

} // namespace dcsat::io
