#pragma once

#include <string>
#include <vector>

#include "acaf/series.hpp"

namespace acaf {

/// A date x ticker table of positive closing prices. Missing entries are NaN.
struct PricePanel {
    std::vector<std::string> dates;    // strictly increasing (ISO-8601 sorts)
    std::vector<std::string> tickers;
    std::vector<double> prices;        // row-major, dates.size() * tickers.size()

    double at(std::size_t d, std::size_t i) const { return prices[d * tickers.size() + i]; }
    double& at(std::size_t d, std::size_t i) { return prices[d * tickers.size() + i]; }

    void validate() const;
};

/// Ordered intra-day trade/quote prices. Timestamps are ISO-8601
/// ("YYYY-MM-DD HH:MM[:SS]", 'T' separator accepted), nondecreasing.
struct TickSeries {
    std::vector<std::string> timestamps;
    std::vector<double> prices;

    void validate() const;
};

/// r_t = -log(p_t / p_{t-1}); output is one shorter than the input.
/// Nonpositive prices are rejected with the offending index.
std::vector<double> neg_log_returns(const std::vector<double>& prices);

struct PanelMaximaResult {
    MaximaSeries series;                 // labels = dates
    std::vector<int> contributors;       // tickers with a valid return, per kept date
    std::vector<std::string> dropped;    // dates where no ticker had a valid return
};

/// Per date, the maximum of available tickers' negative log-returns. A
/// ticker contributes on date t only when it has prices on both t-1 and t;
/// dates with no contributor are dropped and reported.
PanelMaximaResult cross_sectional_maxima(const PricePanel& panel);

struct IntradayMaximaResult {
    MaximaSeries series;                 // labels = days
    std::vector<int> grid_points;        // resampled grid points per kept day
    std::vector<std::string> dropped;    // days with fewer than 2 grid points
};

/// Resamples each trading day to last-observed prices on an interval grid
/// anchored at midnight (carrying the last observation forward across empty
/// slots, never across days), computes within-day negative log-returns on
/// the grid, and returns each day's maximum.
IntradayMaximaResult intraday_maxima(const TickSeries& ticks, int interval_minutes);

/// Delimited-text loading. Column mapping is by header name; the value
/// columns must parse as decimal numbers, with `na_markers` (and empty
/// fields) treated as missing where missing values are legal.
struct CsvOptions {
    char delimiter = ',';
    std::string date_column = "date";        // panel date / tick timestamp column
    std::string price_column = "price";      // tick price column
    std::vector<std::string> na_markers = {"", "NA", "NaN", "nan"};
};

PricePanel load_price_panel(const std::string& path, const CsvOptions& opts);
TickSeries load_tick_series(const std::string& path, const CsvOptions& opts);

}  // namespace acaf
