#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "recon/errors.hpp"

namespace recon {

// A cell is either a finite value or explicitly missing. Missing never enters
// arithmetic silently; dense extraction throws when a window is incomplete.
using Cell = std::optional<double>;

// Closed calendar-year interval.
struct AnalysisWindow {
    int first_year = 0;
    int last_year = 0;

    AnalysisWindow() = default;
    AnalysisWindow(int first, int last) : first_year(first), last_year(last) {
        if (first_year > last_year)
            throw DataError("AnalysisWindow: first_year " + std::to_string(first_year) +
                            " > last_year " + std::to_string(last_year));
    }
    int n_years() const { return last_year - first_year + 1; }
};

// Annual series on a contiguous year index; missing cells are explicit.
class TimeSeries {
  public:
    TimeSeries() = default;
    TimeSeries(int start_year, std::vector<Cell> values)
        : start_year_(start_year), values_(std::move(values)) {
        if (values_.empty()) throw DataError("TimeSeries: length must be >= 1");
    }
    static TimeSeries from_values(int start_year, const std::vector<double>& v) {
        std::vector<Cell> cells(v.begin(), v.end());
        return TimeSeries(start_year, std::move(cells));
    }
    static TimeSeries from_vector(int start_year, const Eigen::VectorXd& v) {
        std::vector<Cell> cells(static_cast<std::size_t>(v.size()));
        for (Eigen::Index i = 0; i < v.size(); ++i) cells[static_cast<std::size_t>(i)] = v[i];
        return TimeSeries(start_year, std::move(cells));
    }

    int start_year() const { return start_year_; }
    int end_year() const { return start_year_ + static_cast<int>(values_.size()) - 1; }
    std::size_t size() const { return values_.size(); }
    AnalysisWindow span() const { return {start_year(), end_year()}; }

    bool covers(const AnalysisWindow& w) const {
        return w.first_year >= start_year() && w.last_year <= end_year();
    }

    const Cell& at_year(int year) const {
        if (year < start_year() || year > end_year())
            throw DataError("TimeSeries: year " + std::to_string(year) + " outside span");
        return values_[static_cast<std::size_t>(year - start_year_)];
    }
    Cell& at_year(int year) {
        return const_cast<Cell&>(static_cast<const TimeSeries&>(*this).at_year(year));
    }
    const std::vector<Cell>& cells() const { return values_; }

    bool has_missing() const {
        for (const auto& c : values_)
            if (!c) return true;
        return false;
    }
    bool has_missing(const AnalysisWindow& w) const {
        for (int y = w.first_year; y <= w.last_year; ++y)
            if (!at_year(y)) return true;
        return false;
    }

    // Dense values over a window; throws DataError on any missing cell.
    Eigen::VectorXd to_vector(const AnalysisWindow& w) const {
        if (!covers(w))
            throw DataError("TimeSeries: window " + std::to_string(w.first_year) + "-" +
                            std::to_string(w.last_year) + " outside span");
        Eigen::VectorXd out(w.n_years());
        for (int y = w.first_year; y <= w.last_year; ++y) {
            const Cell& c = at_year(y);
            if (!c) throw DataError("TimeSeries: missing value in year " + std::to_string(y));
            out[y - w.first_year] = *c;
        }
        return out;
    }
    Eigen::VectorXd to_vector() const { return to_vector(span()); }

    TimeSeries slice(const AnalysisWindow& w) const {
        if (!covers(w)) throw DataError("TimeSeries: slice window outside span");
        std::vector<Cell> cells(values_.begin() + (w.first_year - start_year_),
                                values_.begin() + (w.last_year - start_year_ + 1));
        return TimeSeries(w.first_year, std::move(cells));
    }

  private:
    int start_year_ = 0;
    std::vector<Cell> values_;
};

// Per-column record of the standardization applied to a ProxyMatrix column.
struct Standardization {
    double mean = 0.0;
    double sd = 1.0;
    AnalysisWindow window;
};

// Named columns of equal span. Immutable after construction; all operations
// return new matrices.
class ProxyMatrix {
  public:
    ProxyMatrix() = default;
    ProxyMatrix(std::vector<std::string> names, std::vector<TimeSeries> columns)
        : names_(std::move(names)), columns_(std::move(columns)) {
        if (names_.size() != columns_.size())
            throw DataError("ProxyMatrix: name/column count mismatch");
        if (columns_.empty()) throw DataError("ProxyMatrix: needs at least one column");
        for (const auto& c : columns_)
            if (c.start_year() != columns_[0].start_year() || c.size() != columns_[0].size())
                throw DataError("ProxyMatrix: columns must share start year and length");
    }

    int start_year() const { return columns_.at(0).start_year(); }
    int end_year() const { return columns_.at(0).end_year(); }
    std::size_t n_years() const { return columns_.at(0).size(); }
    std::size_t n_columns() const { return columns_.size(); }
    AnalysisWindow span() const { return {start_year(), end_year()}; }
    bool covers(const AnalysisWindow& w) const { return columns_.at(0).covers(w); }

    const std::vector<std::string>& names() const { return names_; }
    const TimeSeries& column(std::size_t j) const { return columns_.at(j); }
    const TimeSeries& column(const std::string& name) const { return columns_.at(index_of(name)); }
    std::size_t index_of(const std::string& name) const {
        for (std::size_t j = 0; j < names_.size(); ++j)
            if (names_[j] == name) return j;
        throw DataError("ProxyMatrix: unknown column '" + name + "'");
    }
    bool has_column(const std::string& name) const {
        for (const auto& n : names_)
            if (n == name) return true;
        return false;
    }

    const std::vector<Standardization>& standardization() const { return standardization_; }
    bool is_standardized() const { return !standardization_.empty(); }
    void set_standardization(std::vector<Standardization> s) {
        if (!s.empty() && s.size() != columns_.size())
            throw DataError("ProxyMatrix: standardization record count mismatch");
        standardization_ = std::move(s);
    }

    bool has_missing(const AnalysisWindow& w) const {
        for (const auto& c : columns_)
            if (c.has_missing(w)) return true;
        return false;
    }

    // Dense years-by-columns matrix over a window; throws on missing cells.
    Eigen::MatrixXd to_matrix(const AnalysisWindow& w) const {
        Eigen::MatrixXd out(w.n_years(), static_cast<Eigen::Index>(columns_.size()));
        for (std::size_t j = 0; j < columns_.size(); ++j) out.col(static_cast<Eigen::Index>(j)) = columns_[j].to_vector(w);
        return out;
    }
    Eigen::MatrixXd to_matrix() const { return to_matrix(span()); }

  private:
    std::vector<std::string> names_;
    std::vector<TimeSeries> columns_;
    std::vector<Standardization> standardization_;
};

}  // namespace recon
