#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "recon/timeseries.hpp"

namespace recon::dataset {

enum class TableFormat { Wide, Long };
enum class AlignPolicy { RejectMissing, DropIncompleteColumns };

// CSV ingestion. Wide: `year,<name1>,<name2>,...`, one row per consecutive
// year, empty field = missing. Long: `year,name,value` triples; (year, name)
// pairs absent from the file become missing cells. Duplicate years (wide) or
// duplicate (year, name) pairs (long) and non-monotone wide year columns are
// rejected.
ProxyMatrix load_table(const std::string& path, TableFormat format);

// load_table restricted to a single-column table.
TimeSeries load_series(const std::string& path, TableFormat format = TableFormat::Wide);

// Inverse of load_table: finite cells round-trip bit-for-bit (shortest
// round-trip decimal form), missing cells become empty fields.
void write_table(const std::string& path, const ProxyMatrix& data,
                 TableFormat format = TableFormat::Wide);
void write_table(const std::string& path, const TimeSeries& series,
                 const std::string& name = "value");

struct AlignResult {
    ProxyMatrix data;
    std::vector<std::string> dropped;  // columns removed by DropIncompleteColumns
};

// Restricts data to the window. RejectMissing errors on any missing cell in
// the window; DropIncompleteColumns removes columns that are incomplete there
// and reports their names.
AlignResult align(const ProxyMatrix& data, const AnalysisWindow& window, AlignPolicy policy);

// Centers and scales every column by its mean/sd over `window` (sd with the
// n-1 denominator), applying the transform over the full column span and
// recording the per-column parameters. Columns must be complete and
// non-constant over the window.
ProxyMatrix standardize(const ProxyMatrix& data, const AnalysisWindow& window);

// Removes the named columns, preserving the order of the rest.
ProxyMatrix drop_named(const ProxyMatrix& data, const std::vector<std::string>& names);

struct SyntheticWorld {
    TimeSeries temperature;
    ProxyMatrix proxies;  // standardized over the full span
};

// Test world with known ground truth: temperature is a stationary AR(1) with
// coefficient temp_ar; proxy j = signal * temperature + (1 - signal) * e_j
// with e_j an independent stationary AR(1) with coefficient proxy_ar, then
// standardized. Deterministic given seed.
SyntheticWorld gen_synthetic_world(int n_years, int n_proxies, double signal, double proxy_ar,
                                   double temp_ar, std::uint64_t seed, int start_year = 1850);

}  // namespace recon::dataset
