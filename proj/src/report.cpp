#include "covertsim/report.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include <openssl/evp.h>

#include "covertsim/model.hpp"

namespace covertsim {

std::string format_double(double x)
{
    if (std::isnan(x))
        return "nan";
    if (std::isinf(x))
        return x > 0 ? "inf" : "-inf";
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
    if (ec != std::errc{})
        throw std::runtime_error("format_double: conversion failed");
    return std::string(buf, end);
}

CsvTable::CsvTable(std::vector<std::string> columns) : width_(columns.size())
{
    row(columns);
    rows_ = 0;
}

CsvTable& CsvTable::row(const std::vector<std::string>& cells)
{
    if (cells.size() != width_)
        throw std::logic_error("CsvTable: row width mismatch");
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i)
            text_ += ',';
        text_ += cells[i];
    }
    text_ += '\n';
    ++rows_;
    return *this;
}

std::string CsvTable::str() const
{
    return text_;
}

void CsvTable::write(const std::filesystem::path& path) const
{
    write_text(path, text_);
}

std::string git_blob_hash(const std::string& content)
{
    const std::string header = "blob " + std::to_string(content.size()) + '\0';
    const std::string object = header + content;
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(object.data(), object.size(), digest, &len, EVP_sha1(), nullptr) != 1)
        throw std::runtime_error("git_blob_hash: SHA-1 failed");
    static const char* hex = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        const unsigned char b = digest[i];
        out += hex[b >> 4];
        out += hex[b & 0xF];
    }
    return out;
}

void write_text(const std::filesystem::path& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw ConfigError("cannot write output file: " + path.string());
    out << text;
}

} // namespace covertsim
