#include "recon/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "recon/rng.hpp"

namespace recon::dataset {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            fields.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur.push_back(ch);
        }
    }
    fields.push_back(cur);
    return fields;
}

int parse_year(const std::string& s, std::size_t line_no) {
    int year = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), year);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw DataError("line " + std::to_string(line_no) + ": bad year field '" + s + "'");
    return year;
}

Cell parse_cell(const std::string& s, std::size_t line_no) {
    if (s.empty()) return std::nullopt;
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw DataError("line " + std::to_string(line_no) + ": bad value field '" + s + "'");
    return v;
}

// Shortest decimal form that parses back to the same double.
std::string format_value(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

std::vector<std::string> read_lines(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open '" + path + "'");
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
    while (!lines.empty() && lines.back().empty()) lines.pop_back();
    if (lines.empty()) throw DataError("'" + path + "' is empty");
    return lines;
}

ProxyMatrix load_wide(const std::vector<std::string>& lines, const std::string& path) {
    const auto header = split_csv_line(lines[0]);
    if (header.size() < 2) throw DataError("'" + path + "': wide table needs a year column and at least one series");
    std::vector<std::string> names(header.begin() + 1, header.end());

    std::vector<int> years;
    std::vector<std::vector<Cell>> cols(names.size());
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        const auto fields = split_csv_line(lines[i]);
        if (fields.size() != header.size())
            throw DataError(path + " line " + std::to_string(i + 1) + ": expected " +
                            std::to_string(header.size()) + " fields, got " +
                            std::to_string(fields.size()));
        const int year = parse_year(fields[0], i + 1);
        if (!years.empty()) {
            if (year == years.back()) throw DataError(path + ": duplicate year " + std::to_string(year));
            if (year < years.back())
                throw DataError(path + ": years not ascending at " + std::to_string(year));
            if (year != years.back() + 1)
                throw DataError(path + ": gap in years between " + std::to_string(years.back()) +
                                " and " + std::to_string(year) +
                                " (missing values must be empty fields, not absent rows)");
        }
        years.push_back(year);
        for (std::size_t j = 0; j < names.size(); ++j) cols[j].push_back(parse_cell(fields[j + 1], i + 1));
    }
    if (years.empty()) throw DataError("'" + path + "' has no data rows");

    std::vector<TimeSeries> columns;
    columns.reserve(cols.size());
    for (auto& c : cols) columns.emplace_back(years[0], std::move(c));
    return ProxyMatrix(std::move(names), std::move(columns));
}

ProxyMatrix load_long(const std::vector<std::string>& lines, const std::string& path) {
    const auto header = split_csv_line(lines[0]);
    if (header.size() != 3) throw DataError("'" + path + "': long table needs exactly year,name,value columns");

    struct Entry {
        int year;
        std::string name;
        Cell value;
    };
    std::vector<Entry> entries;
    std::vector<std::string> names;  // in first-appearance order
    int min_year = 0, max_year = 0;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        const auto fields = split_csv_line(lines[i]);
        if (fields.size() != 3)
            throw DataError(path + " line " + std::to_string(i + 1) + ": expected 3 fields");
        Entry e{parse_year(fields[0], i + 1), fields[1], parse_cell(fields[2], i + 1)};
        if (entries.empty()) {
            min_year = max_year = e.year;
        } else {
            min_year = std::min(min_year, e.year);
            max_year = std::max(max_year, e.year);
        }
        if (std::find(names.begin(), names.end(), e.name) == names.end()) names.push_back(e.name);
        entries.push_back(std::move(e));
    }
    if (entries.empty()) throw DataError("'" + path + "' has no data rows");

    const std::size_t n = static_cast<std::size_t>(max_year - min_year + 1);
    std::vector<std::vector<Cell>> cols(names.size(), std::vector<Cell>(n));
    std::vector<std::vector<bool>> seen(names.size(), std::vector<bool>(n, false));
    for (const auto& e : entries) {
        std::size_t j = static_cast<std::size_t>(
            std::find(names.begin(), names.end(), e.name) - names.begin());
        std::size_t t = static_cast<std::size_t>(e.year - min_year);
        if (seen[j][t])
            throw DataError(path + ": duplicate (year, name) = (" + std::to_string(e.year) + ", " +
                            e.name + ")");
        seen[j][t] = true;
        cols[j][t] = e.value;
    }
    std::vector<TimeSeries> columns;
    columns.reserve(cols.size());
    for (auto& c : cols) columns.emplace_back(min_year, std::move(c));
    return ProxyMatrix(std::move(names), std::move(columns));
}

}  // namespace

ProxyMatrix load_table(const std::string& path, TableFormat format) {
    const auto lines = read_lines(path);
    return format == TableFormat::Wide ? load_wide(lines, path) : load_long(lines, path);
}

TimeSeries load_series(const std::string& path, TableFormat format) {
    ProxyMatrix m = load_table(path, format);
    if (m.n_columns() != 1)
        throw DataError("'" + path + "': expected a single series, found " +
                        std::to_string(m.n_columns()) + " columns");
    return m.column(0);
}

void write_table(const std::string& path, const ProxyMatrix& data, TableFormat format) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write '" + path + "'");
    if (format == TableFormat::Wide) {
        out << "year";
        for (const auto& n : data.names()) out << ',' << n;
        out << '\n';
        for (int y = data.start_year(); y <= data.end_year(); ++y) {
            out << y;
            for (std::size_t j = 0; j < data.n_columns(); ++j) {
                const Cell& c = data.column(j).at_year(y);
                out << ',';
                if (c) out << format_value(*c);
            }
            out << '\n';
        }
    } else {
        out << "year,name,value\n";
        for (int y = data.start_year(); y <= data.end_year(); ++y)
            for (std::size_t j = 0; j < data.n_columns(); ++j) {
                const Cell& c = data.column(j).at_year(y);
                out << y << ',' << data.names()[j] << ',';
                if (c) out << format_value(*c);
                out << '\n';
            }
    }
    if (!out) throw DataError("failed writing '" + path + "'");
}

void write_table(const std::string& path, const TimeSeries& series, const std::string& name) {
    write_table(path, ProxyMatrix({name}, {series}), TableFormat::Wide);
}

AlignResult align(const ProxyMatrix& data, const AnalysisWindow& window, AlignPolicy policy) {
    if (!data.covers(window))
        throw DataError("align: window " + std::to_string(window.first_year) + "-" +
                        std::to_string(window.last_year) + " outside data span " +
                        std::to_string(data.start_year()) + "-" + std::to_string(data.end_year()));
    std::vector<std::string> kept_names, dropped;
    std::vector<TimeSeries> kept_cols;
    for (std::size_t j = 0; j < data.n_columns(); ++j) {
        if (data.column(j).has_missing(window)) {
            if (policy == AlignPolicy::RejectMissing)
                throw DataError("align: column '" + data.names()[j] +
                                "' has missing values in window");
            dropped.push_back(data.names()[j]);
        } else {
            kept_names.push_back(data.names()[j]);
            kept_cols.push_back(data.column(j).slice(window));
        }
    }
    if (kept_cols.empty()) throw DataError("align: no column is complete over the window");
    return {ProxyMatrix(std::move(kept_names), std::move(kept_cols)), std::move(dropped)};
}

ProxyMatrix standardize(const ProxyMatrix& data, const AnalysisWindow& window) {
    if (!data.covers(window)) throw DataError("standardize: window outside data span");
    std::vector<TimeSeries> cols;
    std::vector<Standardization> recs;
    cols.reserve(data.n_columns());
    for (std::size_t j = 0; j < data.n_columns(); ++j) {
        const Eigen::VectorXd v = data.column(j).to_vector(window);  // throws if incomplete
        const double mean = v.mean();
        const double sd = std::sqrt((v.array() - mean).square().sum() / (v.size() - 1));
        if (!(sd > 0.0))
            throw DataError("standardize: column '" + data.names()[j] +
                            "' is constant over the window");
        std::vector<Cell> cells = data.column(j).cells();
        for (auto& c : cells)
            if (c) c = (*c - mean) / sd;
        cols.emplace_back(data.start_year(), std::move(cells));
        recs.push_back({mean, sd, window});
    }
    ProxyMatrix out(data.names(), std::move(cols));
    out.set_standardization(std::move(recs));
    return out;
}

ProxyMatrix drop_named(const ProxyMatrix& data, const std::vector<std::string>& names) {
    for (const auto& n : names)
        if (!data.has_column(n)) throw DataError("drop_named: unknown column '" + n + "'");
    std::vector<std::string> kept_names;
    std::vector<TimeSeries> kept_cols;
    std::vector<Standardization> kept_recs;
    for (std::size_t j = 0; j < data.n_columns(); ++j) {
        if (std::find(names.begin(), names.end(), data.names()[j]) != names.end()) continue;
        kept_names.push_back(data.names()[j]);
        kept_cols.push_back(data.column(j));
        if (data.is_standardized()) kept_recs.push_back(data.standardization()[j]);
    }
    if (kept_cols.empty()) throw DataError("drop_named: all columns dropped");
    ProxyMatrix out(std::move(kept_names), std::move(kept_cols));
    out.set_standardization(std::move(kept_recs));
    return out;
}

SyntheticWorld gen_synthetic_world(int n_years, int n_proxies, double signal, double proxy_ar,
                                   double temp_ar, std::uint64_t seed, int start_year) {
    if (n_years < 10) throw DataError("gen_synthetic_world: n_years must be >= 10");
    if (n_proxies < 1) throw DataError("gen_synthetic_world: n_proxies must be >= 1");
    if (signal < 0.0 || signal > 1.0) throw DataError("gen_synthetic_world: signal in [0,1]");
    if (proxy_ar < 0.0 || proxy_ar >= 1.0 || temp_ar < 0.0 || temp_ar >= 1.0)
        throw DataError("gen_synthetic_world: AR coefficients in [0,1)");

    RngStream temp_rng = RngStream::substream(seed, {0});
    const std::vector<double> temp = temp_rng.stationary_ar1_path(n_years, temp_ar);

    std::vector<std::string> names;
    std::vector<TimeSeries> cols;
    names.reserve(static_cast<std::size_t>(n_proxies));
    for (int j = 0; j < n_proxies; ++j) {
        RngStream rng = RngStream::substream(seed, {1, static_cast<std::uint64_t>(j)});
        const std::vector<double> noise = rng.stationary_ar1_path(n_years, proxy_ar);
        std::vector<Cell> cells(static_cast<std::size_t>(n_years));
        for (int t = 0; t < n_years; ++t) {
            const auto i = static_cast<std::size_t>(t);
            cells[i] = signal * temp[i] + (1.0 - signal) * noise[i];
        }
        names.push_back("proxy" + std::to_string(j + 1));
        cols.emplace_back(start_year, std::move(cells));
    }
    ProxyMatrix proxies(std::move(names), std::move(cols));
    const AnalysisWindow full = proxies.span();
    return {TimeSeries::from_values(start_year, temp), standardize(proxies, full)};
}

}  // namespace recon::dataset
