#include "rpt/dataset_io.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "rpt/error.hpp"

namespace rpt {

namespace {

constexpr char kMagic[4] = {'P', 'D', 'A', 'T'};
constexpr std::uint16_t kVersion = 1;

template <typename T>
void put_le(std::string& out, T v) {
    for (std::size_t i = 0; i < sizeof(T); ++i)
        out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

template <typename T>
T get_le(const std::string& bytes, std::size_t pos) {
    T v = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i)
        v |= static_cast<T>(static_cast<std::uint8_t>(bytes[pos + i])) << (8 * i);
    return v;
}

Dataset load_binary(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error("cannot open: " + path);
    std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

    constexpr std::size_t kHeader = 4 + 2 + 8 + 4;
    if (bytes.size() < kHeader)
        throw io_error(path + ": truncated header, expected at least " +
                       std::to_string(kHeader) + " bytes, got " + std::to_string(bytes.size()));
    if (std::memcmp(bytes.data(), kMagic, 4) != 0)
        throw io_error(path + ": bad magic (expected PDAT)");
    const auto version = get_le<std::uint16_t>(bytes, 4);
    if (version != kVersion)
        throw io_error(path + ": unsupported version " + std::to_string(version));
    const auto n = get_le<std::uint64_t>(bytes, 6);
    const auto d = get_le<std::uint32_t>(bytes, 14);
    const std::size_t expected = kHeader + static_cast<std::size_t>(n) * d * 8;
    if (bytes.size() != expected)
        throw io_error(path + ": expected " + std::to_string(expected) + " bytes, got " +
                       std::to_string(bytes.size()));
    std::vector<double> pts(static_cast<std::size_t>(n) * d);
    for (std::size_t i = 0; i < pts.size(); ++i)
        pts[i] = std::bit_cast<double>(get_le<std::uint64_t>(bytes, kHeader + i * 8));
    return Dataset(std::move(pts), n, d, "external", path);
}

void save_binary(const Dataset& data, const std::string& path) {
    std::string bytes;
    bytes.reserve(18 + data.raw().size() * 8);
    bytes.append(kMagic, 4);
    put_le(bytes, kVersion);
    put_le(bytes, static_cast<std::uint64_t>(data.size()));
    put_le(bytes, static_cast<std::uint32_t>(data.dim()));
    for (double v : data.raw()) put_le(bytes, std::bit_cast<std::uint64_t>(v));
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw io_error("cannot open for writing: " + path);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw io_error("write failed: " + path);
}

Dataset load_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open: " + path);
    std::vector<double> pts;
    std::size_t d = 0;
    std::size_t n = 0;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::vector<double> row;
        std::size_t start = 0;
        bool parse_failed = false;
        while (start <= line.size()) {
            std::size_t end = line.find(',', start);
            if (end == std::string::npos) end = line.size();
            const std::string field = line.substr(start, end - start);
            char* parse_end = nullptr;
            const double v = std::strtod(field.c_str(), &parse_end);
            if (parse_end == field.c_str() || *parse_end != '\0') {
                parse_failed = true;
                break;
            }
            row.push_back(v);
            start = end + 1;
        }
        if (parse_failed) {
            // A non-numeric first line is a header; anywhere else it is an error.
            if (n == 0 && d == 0) continue;
            throw io_error(path + ":" + std::to_string(line_no) + ": cannot parse row");
        }
        if (d == 0) {
            d = row.size();
        } else if (row.size() != d) {
            throw io_error(path + ":" + std::to_string(line_no) + ": expected " +
                           std::to_string(d) + " columns, got " + std::to_string(row.size()));
        }
        for (double v : row) {
            if (!std::isfinite(v))
                throw validation_error(path + ":" + std::to_string(line_no) +
                                       ": non-finite value");
            pts.push_back(v);
        }
        ++n;
    }
    if (n == 0) throw io_error(path + ": no data rows");
    return Dataset(std::move(pts), n, d, "external", path);
}

void save_csv(const Dataset& data, const std::string& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw io_error("cannot open for writing: " + path);
    for (std::size_t j = 0; j < data.dim(); ++j)
        out << (j == 0 ? "" : ",") << "x" << (j + 1);
    out << "\n";
    char buf[40];
    for (std::size_t i = 0; i < data.size(); ++i) {
        const auto row = data.point(i);
        for (std::size_t j = 0; j < data.dim(); ++j) {
            std::snprintf(buf, sizeof(buf), "%.17g", row[j]);
            out << (j == 0 ? "" : ",") << buf;
        }
        out << "\n";
    }
    if (!out) throw io_error("write failed: " + path);
}

}  // namespace

DatasetFormat dataset_format_from_name(const std::string& name) {
    if (name == "csv") return DatasetFormat::csv;
    if (name == "binary" || name == "pdat") return DatasetFormat::binary;
    throw validation_error("unknown dataset format: " + name);
}

Dataset load_dataset(const std::string& path, DatasetFormat format) {
    return format == DatasetFormat::binary ? load_binary(path) : load_csv(path);
}

void save_dataset(const Dataset& data, const std::string& path, DatasetFormat format) {
    if (format == DatasetFormat::binary)
        save_binary(data, path);
    else
        save_csv(data, path);
}

}  // namespace rpt
