#include "acaf/ingestion.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace acaf {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::vector<std::string> split_line(const std::string& line, char delim) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = line.find(delim, start);
        if (pos == std::string::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    for (auto& f : fields) {
        while (!f.empty() && (f.back() == '\r' || f.back() == ' ')) f.pop_back();
        std::size_t b = 0;
        while (b < f.size() && f[b] == ' ') ++b;
        f.erase(0, b);
    }
    return fields;
}

bool parse_double(const std::string& s, double& out) {
    const char* first = s.data();
    const char* last = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && ptr == last;
}

bool is_missing(const std::string& s, const std::vector<std::string>& markers) {
    return std::find(markers.begin(), markers.end(), s) != markers.end();
}

std::vector<std::string> read_lines(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty()) lines.push_back(line);
    }
    return lines;
}

// "YYYY-MM-DD HH:MM[:SS(.fff)]" with ' ' or 'T'; returns the date part and
// seconds since midnight.
void parse_timestamp(const std::string& ts, std::string& date, double& seconds) {
    const std::size_t sep = ts.find_first_of(" T");
    if (sep == std::string::npos || sep + 1 >= ts.size())
        throw std::invalid_argument("timestamp missing time component: " + ts);
    date = ts.substr(0, sep);
    const std::string time = ts.substr(sep + 1);

    int hh = 0, mm = 0;
    double ss = 0.0;
    const std::size_t c1 = time.find(':');
    if (c1 == std::string::npos) throw std::invalid_argument("malformed time: " + ts);
    const std::size_t c2 = time.find(':', c1 + 1);
    hh = std::stoi(time.substr(0, c1));
    mm = std::stoi(time.substr(c1 + 1, (c2 == std::string::npos ? std::string::npos
                                                                : c2 - c1 - 1)));
    if (c2 != std::string::npos) ss = std::stod(time.substr(c2 + 1));
    if (hh < 0 || hh > 23 || mm < 0 || mm > 59 || ss < 0.0 || ss >= 60.0)
        throw std::invalid_argument("time of day out of range: " + ts);
    seconds = hh * 3600.0 + mm * 60.0 + ss;
}

}  // namespace

void PricePanel::validate() const {
    if (dates.empty() || tickers.empty())
        throw std::invalid_argument("PricePanel: empty panel");
    if (prices.size() != dates.size() * tickers.size())
        throw std::invalid_argument("PricePanel: price table shape mismatch");
    for (std::size_t d = 1; d < dates.size(); ++d)
        if (!(dates[d - 1] < dates[d]))
            throw std::invalid_argument("PricePanel: dates must be strictly increasing");
    for (double p : prices)
        if (!std::isnan(p) && !(p > 0.0))
            throw std::invalid_argument("PricePanel: prices must be positive where present");
}

void TickSeries::validate() const {
    if (timestamps.size() != prices.size())
        throw std::invalid_argument("TickSeries: timestamp/price length mismatch");
    for (double p : prices)
        if (!(p > 0.0)) throw std::invalid_argument("TickSeries: prices must be positive");
}

std::vector<double> neg_log_returns(const std::vector<double>& prices) {
    if (prices.size() < 2)
        throw std::invalid_argument("neg_log_returns: need at least 2 prices");
    for (std::size_t i = 0; i < prices.size(); ++i)
        if (!(prices[i] > 0.0))
            throw std::invalid_argument("neg_log_returns: nonpositive price at index " +
                                        std::to_string(i));
    std::vector<double> r(prices.size() - 1);
    for (std::size_t i = 1; i < prices.size(); ++i)
        r[i - 1] = -std::log(prices[i] / prices[i - 1]);
    return r;
}

PanelMaximaResult cross_sectional_maxima(const PricePanel& panel) {
    panel.validate();
    PanelMaximaResult res;
    const std::size_t nt = panel.tickers.size();
    for (std::size_t d = 1; d < panel.dates.size(); ++d) {
        double best = -std::numeric_limits<double>::infinity();
        int n_contrib = 0;
        for (std::size_t i = 0; i < nt; ++i) {
            const double prev = panel.at(d - 1, i);
            const double cur = panel.at(d, i);
            if (std::isnan(prev) || std::isnan(cur)) continue;
            const double r = -std::log(cur / prev);
            best = std::max(best, r);
            ++n_contrib;
        }
        if (n_contrib == 0) {
            res.dropped.push_back(panel.dates[d]);
            continue;
        }
        res.series.values.push_back(best);
        res.series.labels.push_back(panel.dates[d]);
        res.contributors.push_back(n_contrib);
    }
    if (res.series.empty())
        throw std::invalid_argument("cross_sectional_maxima: no date with a valid return");
    return res;
}

IntradayMaximaResult intraday_maxima(const TickSeries& ticks, int interval_minutes) {
    ticks.validate();
    if (interval_minutes < 1)
        throw std::invalid_argument("intraday_maxima: interval must be a positive number of minutes");
    if (ticks.timestamps.empty())
        throw std::invalid_argument("intraday_maxima: empty tick series");

    const double bucket_seconds = 60.0 * interval_minutes;

    struct DayAccum {
        std::string day;
        std::vector<long> buckets;
        std::vector<double> last_price;
    };

    IntradayMaximaResult res;
    DayAccum cur;
    std::string prev_day;
    double prev_seconds = -1.0;

    auto flush_day = [&](DayAccum& acc) {
        if (acc.day.empty()) return;
        // LOCF over empty slots between the first and last occupied bucket
        std::vector<double> grid;
        for (std::size_t k = 0; k < acc.buckets.size(); ++k) {
            if (k > 0) {
                const long gap = acc.buckets[k] - acc.buckets[k - 1];
                for (long g = 1; g < gap; ++g) grid.push_back(acc.last_price[k - 1]);
            }
            grid.push_back(acc.last_price[k]);
        }
        if (grid.size() < 2) {
            res.dropped.push_back(acc.day);
            return;
        }
        const std::vector<double> r = neg_log_returns(grid);
        res.series.values.push_back(*std::max_element(r.begin(), r.end()));
        res.series.labels.push_back(acc.day);
        res.grid_points.push_back(static_cast<int>(grid.size()));
    };

    for (std::size_t i = 0; i < ticks.timestamps.size(); ++i) {
        std::string day;
        double seconds = 0.0;
        parse_timestamp(ticks.timestamps[i], day, seconds);

        if (day == prev_day && seconds < prev_seconds)
            throw std::invalid_argument("intraday_maxima: unordered timestamps at row " +
                                        std::to_string(i));
        if (!prev_day.empty() && day < prev_day)
            throw std::invalid_argument("intraday_maxima: unordered days at row " +
                                        std::to_string(i));

        if (day != cur.day) {
            flush_day(cur);
            cur = DayAccum{day, {}, {}};
        }
        const long bucket = static_cast<long>(std::floor(seconds / bucket_seconds));
        if (!cur.buckets.empty() && cur.buckets.back() == bucket) {
            cur.last_price.back() = ticks.prices[i];  // last observation wins
        } else {
            cur.buckets.push_back(bucket);
            cur.last_price.push_back(ticks.prices[i]);
        }
        prev_day = day;
        prev_seconds = seconds;
    }
    flush_day(cur);

    if (res.series.empty())
        throw std::invalid_argument("intraday_maxima: no day with at least 2 grid points");
    return res;
}

PricePanel load_price_panel(const std::string& path, const CsvOptions& opts) {
    const std::vector<std::string> lines = read_lines(path);
    if (lines.size() < 2) throw std::runtime_error("panel file has no data rows: " + path);

    const std::vector<std::string> header = split_line(lines[0], opts.delimiter);
    std::size_t date_col = header.size();
    for (std::size_t j = 0; j < header.size(); ++j)
        if (header[j] == opts.date_column) date_col = j;
    if (date_col == header.size())
        throw std::runtime_error("panel file missing date column '" + opts.date_column + "'");

    PricePanel panel;
    for (std::size_t j = 0; j < header.size(); ++j)
        if (j != date_col) panel.tickers.push_back(header[j]);

    for (std::size_t row = 1; row < lines.size(); ++row) {
        const std::vector<std::string> f = split_line(lines[row], opts.delimiter);
        if (f.size() != header.size())
            throw std::runtime_error("panel row " + std::to_string(row) + " has " +
                                     std::to_string(f.size()) + " fields, expected " +
                                     std::to_string(header.size()));
        panel.dates.push_back(f[date_col]);
        for (std::size_t j = 0; j < header.size(); ++j) {
            if (j == date_col) continue;
            if (is_missing(f[j], opts.na_markers)) {
                panel.prices.push_back(kNaN);
                continue;
            }
            double v;
            if (!parse_double(f[j], v))
                throw std::runtime_error("panel row " + std::to_string(row) +
                                         ": cannot parse price '" + f[j] + "'");
            panel.prices.push_back(v);
        }
    }
    panel.validate();
    return panel;
}

TickSeries load_tick_series(const std::string& path, const CsvOptions& opts) {
    const std::vector<std::string> lines = read_lines(path);
    if (lines.size() < 2) throw std::runtime_error("tick file has no data rows: " + path);

    const std::vector<std::string> header = split_line(lines[0], opts.delimiter);
    std::size_t time_col = header.size(), price_col = header.size();
    for (std::size_t j = 0; j < header.size(); ++j) {
        if (header[j] == opts.date_column) time_col = j;
        if (header[j] == opts.price_column) price_col = j;
    }
    if (time_col == header.size())
        throw std::runtime_error("tick file missing timestamp column '" + opts.date_column + "'");
    if (price_col == header.size())
        throw std::runtime_error("tick file missing price column '" + opts.price_column + "'");

    TickSeries ticks;
    for (std::size_t row = 1; row < lines.size(); ++row) {
        const std::vector<std::string> f = split_line(lines[row], opts.delimiter);
        if (f.size() != header.size())
            throw std::runtime_error("tick row " + std::to_string(row) + " malformed");
        double v;
        if (!parse_double(f[price_col], v))
            throw std::runtime_error("tick row " + std::to_string(row) +
                                     ": cannot parse price '" + f[price_col] + "'");
        ticks.timestamps.push_back(f[time_col]);
        ticks.prices.push_back(v);
    }
    ticks.validate();
    return ticks;
}

}  // namespace acaf
