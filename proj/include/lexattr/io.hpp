#ifndef LEXATTR_IO_HPP_
#define LEXATTR_IO_HPP_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace lexattr {

std::string read_file(const std::filesystem::path& path);
std::vector<std::string> read_lines(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& content);

// Shortest round-trip decimal representation (std::to_chars), locale-free.
// Used everywhere a double lands in a text artifact so reruns are
// byte-identical.
std::string format_double(double value);

std::string sha256_hex(const std::string& bytes);
std::string sha256_file(const std::filesystem::path& path);

// Splits one line of a tab-separated file. Fields may not contain tabs or
// newlines; writers enforce that, readers just split.
std::vector<std::string> split_tsv(const std::string& line);
std::string join_tsv(const std::vector<std::string>& fields);

// Raises FormatError if a field would corrupt a TSV row.
void check_tsv_field(const std::string& field, const std::string& what);

}  // namespace lexattr

#endif  // LEXATTR_IO_HPP_
