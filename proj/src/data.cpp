#include "boostreg/data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

namespace boostreg {

namespace {

void check_common(const StreamSpec& spec) {
    if (spec.length < 1) throw ConfigError("stream length must be >= 1");
}

double parse_cell(std::string_view cell, std::int64_t row) {
    // Trim surrounding blanks; the number itself must fill the whole cell.
    while (!cell.empty() && (cell.front() == ' ' || cell.front() == '\t'))
        cell.remove_prefix(1);
    while (!cell.empty() && (cell.back() == ' ' || cell.back() == '\t')) cell.remove_suffix(1);
    double value = 0.0;
    const char* first = cell.data();
    const char* last = cell.data() + cell.size();
    const auto res = std::from_chars(first, last, value);
    if (cell.empty() || res.ec != std::errc{} || res.ptr != last)
        throw IoError("csv row " + std::to_string(row) + ": cell '" + std::string(cell) +
                      "' is not numeric");
    return value;
}

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = line.find(',', start);
        if (pos == std::string_view::npos) {
            out.push_back(line.substr(start));
            break;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return out;
}

}  // namespace

std::vector<Sample> gen_stationary(const StreamSpec& spec) {
    check_common(spec);
    if (spec.length < 2) throw ConfigError("stationary stream needs length >= 2 for scaling");
    if (!(spec.noise_var >= 0.0) || !std::isfinite(spec.noise_var))
        throw ConfigError("noise_var must be finite and >= 0");
    if (!(spec.rho >= -1.0 && spec.rho <= 1.0)) throw ConfigError("rho must be in [-1, 1]");

    const auto T = static_cast<std::size_t>(spec.length);
    RngStream rng(spec.seed);

    // Draw order: 2T coordinate normals first, then T target-noise normals.
    std::vector<double> raw1(T), raw2(T);
    const double mix = std::sqrt(1.0 - spec.rho * spec.rho);
    for (std::size_t t = 0; t < T; ++t) {
        const double z1 = rng.normal();
        const double z2 = rng.normal();
        raw1[t] = z1;
        raw2[t] = spec.rho * z1 + mix * z2;
    }

    const auto scale = [](std::vector<double>& col) {
        const auto [lo_it, hi_it] = std::minmax_element(col.begin(), col.end());
        const double lo = *lo_it, hi = *hi_it;
        if (!(hi > lo)) throw NumericError("gen_stationary: degenerate coordinate block");
        for (double& u : col) u = (u - lo) / (hi - lo);
    };
    scale(raw1);
    scale(raw2);

    const Vec w_star = Vec::Ones(3);
    const double noise_sd = std::sqrt(spec.noise_var);
    std::vector<Sample> out;
    out.reserve(T);
    for (std::size_t t = 0; t < T; ++t) {
        Sample s;
        s.x = Vec(3);
        s.x << raw1[t], raw2[t], 1.0;
        s.d = w_star.dot(s.x) + noise_sd * rng.normal();
        out.push_back(std::move(s));
    }
    return out;
}

double duffing_next(double x_t, double x_prev) {
    return 2.75 * x_t - x_t * x_t * x_t - 0.2 * x_prev;
}

std::vector<Sample> gen_duffing(const StreamSpec& spec) {
    check_common(spec);
    double prev = 0.9279;
    double cur = 0.1727;
    std::vector<Sample> out;
    out.reserve(static_cast<std::size_t>(spec.length));
    for (std::int64_t t = 0; t < spec.length; ++t) {
        const double next = duffing_next(cur, prev);
        if (!std::isfinite(next) || std::abs(next) > 1e6)
            throw NumericError("gen_duffing: orbit diverged at step " + std::to_string(t + 1));
        Sample s;
        s.x = Vec(3);
        s.x << prev, cur, 1.0;
        s.d = next;
        out.push_back(std::move(s));
        prev = cur;
        cur = next;
    }
    return out;
}

std::vector<Sample> load_csv(const std::string& path, bool has_header, int target_column) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "'");

    std::vector<Sample> out;
    std::string line;
    std::int64_t row = 0;
    std::size_t columns = 0;
    while (std::getline(in, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (has_header && row == 1) continue;
        if (line.empty()) throw IoError("csv row " + std::to_string(row) + ": empty row");

        const auto fields = split_fields(line);
        if (columns == 0) {
            columns = fields.size();
            if (columns < 2)
                throw IoError("csv row " + std::to_string(row) +
                              ": need at least two columns (features and a target)");
            if (target_column < -1 || target_column >= static_cast<int>(columns))
                throw ConfigError("target column " + std::to_string(target_column) +
                                  " out of range for " + std::to_string(columns) + " columns");
        } else if (fields.size() != columns) {
            throw IoError("csv row " + std::to_string(row) + ": expected " +
                          std::to_string(columns) + " fields, got " +
                          std::to_string(fields.size()));
        }

        const std::size_t target =
            target_column == -1 ? columns - 1 : static_cast<std::size_t>(target_column);
        Sample s;
        s.x = Vec(static_cast<Eigen::Index>(columns - 1));
        Eigen::Index xi = 0;
        for (std::size_t c = 0; c < columns; ++c) {
            const double value = parse_cell(fields[c], row);
            if (c == target)
                s.d = value;
            else
                s.x[xi++] = value;
        }
        out.push_back(std::move(s));
    }
    if (out.empty()) throw IoError("csv file '" + path + "' holds no data rows");
    return out;
}

std::vector<Sample> normalize_minmax(const std::vector<Sample>& raw) {
    if (raw.empty()) throw std::invalid_argument("normalize_minmax: empty input");
    const Eigen::Index dim = raw.front().x.size();
    for (const Sample& s : raw)
        if (s.x.size() != dim)
            throw std::invalid_argument("normalize_minmax: inconsistent dimensions");

    // Pass 1: ranges per feature dimension and for the target.
    Vec lo = Vec::Constant(dim, std::numeric_limits<double>::infinity());
    Vec hi = Vec::Constant(dim, -std::numeric_limits<double>::infinity());
    double dlo = std::numeric_limits<double>::infinity();
    double dhi = -std::numeric_limits<double>::infinity();
    for (const Sample& s : raw) {
        lo = lo.cwiseMin(s.x);
        hi = hi.cwiseMax(s.x);
        dlo = std::min(dlo, s.d);
        dhi = std::max(dhi, s.d);
    }

    const auto map_one = [](double u, double l, double h) {
        if (!(h > l)) return 0.0;  // constant dimension
        return 2.0 * (u - l) / (h - l) - 1.0;
    };

    // Pass 2: map onto [-1, 1] and append the bias entry.
    std::vector<Sample> out;
    out.reserve(raw.size());
    for (const Sample& s : raw) {
        Sample n;
        n.x = Vec(dim + 1);
        for (Eigen::Index i = 0; i < dim; ++i) n.x[i] = map_one(s.x[i], lo[i], hi[i]);
        n.x[dim] = 1.0;
        n.d = map_one(s.d, dlo, dhi);
        out.push_back(std::move(n));
    }
    return out;
}

std::vector<Sample> make_stream(const StreamSpec& spec) {
    switch (spec.kind) {
        case StreamKind::stationary:
            return gen_stationary(spec);
        case StreamKind::duffing:
            return gen_duffing(spec);
        case StreamKind::csv:
            if (spec.path.empty()) throw ConfigError("csv stream needs a path");
            return normalize_minmax(load_csv(spec.path, spec.has_header, spec.target_column));
    }
    throw ConfigError("unknown stream kind");
}

std::string format_value(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

void write_stream_csv(const std::vector<Sample>& stream, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write '" + path + "'");
    for (const Sample& s : stream) {
        for (Eigen::Index i = 0; i < s.x.size(); ++i) out << format_value(s.x[i]) << ',';
        out << format_value(s.d) << '\n';
    }
    if (!out) throw IoError("write failed for '" + path + "'");
}

}  // namespace boostreg
