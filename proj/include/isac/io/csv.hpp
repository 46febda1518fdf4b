#pragma once

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <system_error>
#include <variant>
#include <vector>

#include "isac/core/signal.hpp"
#include "isac/core/types.hpp"

namespace isac::io {

/// Shortest round-trip-safe text: 17 significant digits, general format.
inline std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

using Cell = std::variant<double, long long, std::string>;

/// In-memory CSV table; rendering is deterministic so identical data gives identical bytes.
class CsvTable {
public:
    explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

    void add_row(std::vector<Cell> row) {
        require(row.size() == header_.size(), "CsvTable: row width does not match header");
        rows_.push_back(std::move(row));
    }

    const std::vector<std::string>& header() const { return header_; }
    const std::vector<std::vector<Cell>>& rows() const { return rows_; }

    std::string render() const {
        std::string out;
        append_line(out, header_);
        for (const auto& r : rows_) {
            std::vector<std::string> cells;
            cells.reserve(r.size());
            for (const auto& c : r) cells.push_back(render_cell(c));
            append_line(out, cells);
        }
        return out;
    }

private:
    static std::string render_cell(const Cell& c) {
        if (const auto* d = std::get_if<double>(&c)) return format_number(*d);
        if (const auto* i = std::get_if<long long>(&c)) return std::to_string(*i);
        return std::get<std::string>(c);
    }

    static void append_line(std::string& out, const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out += ',';
            out += cells[i];
        }
        out += '\n';
    }

    std::vector<std::string> header_;
    std::vector<std::vector<Cell>> rows_;
};

/// Real matrix, one CSV row per matrix row, no header.
inline std::string render_matrix(const RMat& m) {
    std::string out;
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            if (c) out += ',';
            out += format_number(m(r, c));
        }
        out += '\n';
    }
    return out;
}

/// Waveform export: index,re,im.
inline std::string render_waveform(const ComplexSignal& s) {
    CsvTable t({"index", "re", "im"});
    for (Eigen::Index i = 0; i < s.size(); ++i) t.add_row({static_cast<long long>(i), s[i].real(), s[i].imag()});
    return t.render();
}

/// Complex matrix, row-major, each entry as a (re, im) column pair, no header.
inline std::string render_complex_matrix(const CMat& m) {
    std::string out;
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            if (c) out += ',';
            out += format_number(m(r, c).real());
            out += ',';
            out += format_number(m(r, c).imag());
        }
        out += '\n';
    }
    return out;
}

inline double parse_number(const std::string& s) {
    if (s == "nan") return std::nan("");
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    double v = 0.0;
    const auto* first = s.data();
    const auto* last = s.data() + s.size();
    while (first < last && *first == ' ') ++first;
    if (first < last && *first == '+') ++first;
    const auto res = std::from_chars(first, last, v);
    require(res.ec == std::errc() && res.ptr == last, "CSV: cannot parse number '" + s + "'");
    return v;
}

inline CMat parse_complex_matrix(const std::string& text) {
    std::vector<std::vector<double>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<double> vals;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) vals.push_back(parse_number(cell));
        require(vals.size() % 2 == 0, "channel CSV: each row needs re/im pairs");
        rows.push_back(std::move(vals));
    }
    require(!rows.empty(), "channel CSV: no rows");
    const auto cols = static_cast<Eigen::Index>(rows[0].size() / 2);
    CMat m(static_cast<Eigen::Index>(rows.size()), cols);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        require(static_cast<Eigen::Index>(rows[r].size() / 2) == cols, "channel CSV: ragged rows");
        for (Eigen::Index c = 0; c < cols; ++c)
            m(static_cast<Eigen::Index>(r), c) = {rows[r][2 * c], rows[r][2 * c + 1]};
    }
    return m;
}

inline std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    require(static_cast<bool>(f), "cannot open '" + path + "'");
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write '" + path + "'");
    f << content;
}

inline void export_channel(const std::string& path, const ChannelMatrix& h) { write_file(path, render_complex_matrix(h.h)); }

inline ChannelMatrix import_channel(const std::string& path) {
    return {parse_complex_matrix(read_file(path)), ChannelKind::Generic};
}

}  // namespace isac::io
