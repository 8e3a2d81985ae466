#include "aafix/path_csv.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace aafix {

std::string format_double(double x) {
    std::array<char, 32> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
    if (ec != std::errc{}) throw Error("format_double: conversion failed");
    return std::string(buf.data(), ptr);
}

double parse_double(std::string_view text) {
    while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
    while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r')) text.remove_suffix(1);
    if (!text.empty() && text.front() == '+') text.remove_prefix(1);
    double x = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), x);
    if (ec != std::errc{} || ptr != text.data() + text.size())
        throw Error("cannot parse number '" + std::string(text) + "'");
    return x;
}

void write_path_csv(std::ostream& out, const SampledPath& p) {
    out << 't';
    for (int k = 0; k < p.dim(); ++k) out << ",v" << (k + 1);
    out << '\n';
    const auto grid = p.grid();
    for (std::size_t i = 0; i < grid.size(); ++i) {
        out << format_double(grid[i]);
        for (int k = 0; k < p.dim(); ++k) out << ',' << format_double(p.values()(k, static_cast<Eigen::Index>(i)));
        out << '\n';
    }
}

void write_path_csv(const std::string& file, const SampledPath& p) {
    std::ofstream out(file);
    if (!out) throw Error("cannot open " + file + " for writing");
    write_path_csv(out, p);
    if (!out) throw Error("write failed: " + file);
}

namespace {

std::vector<std::string_view> split(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        const auto pos = line.find(',', start);
        out.push_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

}  // namespace

SampledPath read_path_csv(std::istream& in, DomainKind domain, Interpolation interp, TailPolicy tail) {
    std::string line;
    if (!std::getline(in, line)) throw Error("path CSV: missing header");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto header = split(line);
    if (header.size() < 2 || header[0] != "t") throw Error("path CSV: header must be t,v1,...,vd");
    for (std::size_t k = 1; k < header.size(); ++k)
        if (header[k] != "v" + std::to_string(k)) throw Error("path CSV: bad column name '" + std::string(header[k]) + "'");
    const auto d = static_cast<Eigen::Index>(header.size() - 1);

    std::vector<double> grid;
    std::vector<double> flat;
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto cells = split(line);
        if (cells.size() != header.size())
            throw Error("path CSV: row " + std::to_string(row) + " has " + std::to_string(cells.size()) + " fields");
        try {
            grid.push_back(parse_double(cells[0]));
            for (std::size_t k = 1; k < cells.size(); ++k) flat.push_back(parse_double(cells[k]));
        } catch (const Error& e) {
            throw Error("path CSV: row " + std::to_string(row) + ": " + e.what());
        }
    }
    if (grid.empty()) throw Error("path CSV: no data rows");
    Mat values = Eigen::Map<Mat>(flat.data(), d, static_cast<Eigen::Index>(grid.size()));
    return SampledPath(domain, std::move(grid), std::move(values), interp, std::move(tail));
}

SampledPath read_path_csv(const std::string& file, DomainKind domain, Interpolation interp, TailPolicy tail) {
    std::ifstream in(file);
    if (!in) throw Error("cannot open " + file);
    return read_path_csv(in, domain, interp, std::move(tail));
}

}  // namespace aafix
