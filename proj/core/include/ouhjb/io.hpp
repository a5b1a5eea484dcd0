#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace ouhjb::io {

/// Shortest decimal text that parses back to exactly the same double.
/// Locale independent; non-finite values print as "nan", "inf", "-inf".
std::string format_double(double value);

/// Strict locale-independent decimal parse; the whole string must be consumed.
/// Throws ValidationError naming `what` on failure.
double parse_double(std::string_view text, std::string_view what = "value");
long long parse_int(std::string_view text, std::string_view what = "value");
unsigned long long parse_u64(std::string_view text, std::string_view what = "value");

std::string_view trim(std::string_view text);
std::vector<std::string_view> split(std::string_view text, char sep);

/// A parsed CSV table: one header row and string cells.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::size_t column(std::string_view name) const;
};

CsvTable read_csv(const std::filesystem::path& path);

/// Incremental CSV writer. The header is written on construction.
class CsvWriter {
  public:
    CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header);
    ~CsvWriter();
    CsvWriter(const CsvWriter&) = delete;
    CsvWriter& operator=(const CsvWriter&) = delete;

    void row(const std::vector<std::string>& cells);
    void close();

  private:
    struct Impl;
    Impl* impl_;
    std::size_t width_;
};

void write_text(const std::filesystem::path& path, std::string_view content);
std::string read_text(const std::filesystem::path& path);

/// 64-bit FNV-1a over raw bytes, printed as 16 hex digits.
std::string content_hash(std::string_view bytes);

}  // namespace ouhjb::io
