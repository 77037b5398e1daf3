#include "acaf/table_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace acaf {

namespace {

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = line.find(',', start);
        if (pos == std::string::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    if (!fields.empty() && !fields.back().empty() && fields.back().back() == '\r')
        fields.back().pop_back();
    return fields;
}

double parse_field(const std::string& s, const std::string& path) {
    double v;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
        throw std::runtime_error("cannot parse number '" + s + "' in " + path);
    return v;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    return out;
}

std::vector<std::string> load_lines(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty()) lines.push_back(line);
    }
    if (lines.size() < 2) throw std::runtime_error("table has no data rows: " + path);
    return lines;
}

}  // namespace

std::string format_g15(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.15g", x);
    return buf;
}

void write_observations(const std::string& path, const MaximaSeries& series) {
    series.validate();
    std::ofstream out = open_out(path);
    const bool labeled = !series.labels.empty();
    out << (labeled ? "t,Q,label\n" : "t,Q\n");
    for (std::size_t t = 0; t < series.size(); ++t) {
        out << (t + 1) << ',' << format_g15(series.values[t]);
        if (labeled) out << ',' << series.labels[t];
        out << '\n';
    }
}

MaximaSeries read_observations(const std::string& path) {
    const std::vector<std::string> lines = load_lines(path);
    const std::vector<std::string> header = split_csv(lines[0]);
    std::size_t q_col = header.size(), label_col = header.size();
    for (std::size_t j = 0; j < header.size(); ++j) {
        if (header[j] == "Q") q_col = j;
        if (header[j] == "label") label_col = j;
    }
    if (q_col == header.size())
        throw std::runtime_error("observations table missing 'Q' column: " + path);

    MaximaSeries series;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const std::vector<std::string> f = split_csv(lines[i]);
        if (f.size() != header.size())
            throw std::runtime_error("malformed row in " + path);
        series.values.push_back(parse_field(f[q_col], path));
        if (label_col < header.size()) series.labels.push_back(f[label_col]);
    }
    series.validate();
    return series;
}

void write_latent(const std::string& path, const std::vector<LatentState>& states) {
    std::ofstream out = open_out(path);
    out << "t,sigma,alpha1,alpha2\n";
    for (std::size_t t = 0; t < states.size(); ++t) {
        out << (t + 1) << ',' << format_g15(states[t].sigma) << ','
            << format_g15(states[t].alpha1) << ',' << format_g15(states[t].alpha2) << '\n';
    }
}

std::vector<LatentState> read_latent(const std::string& path) {
    const std::vector<std::string> lines = load_lines(path);
    std::vector<LatentState> states;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const std::vector<std::string> f = split_csv(lines[i]);
        if (f.size() != 4) throw std::runtime_error("malformed latent row in " + path);
        states.push_back({parse_field(f[1], path), parse_field(f[2], path),
                          parse_field(f[3], path)});
    }
    return states;
}

void write_table(const std::string& path, const std::vector<std::string>& header,
                 const std::vector<std::vector<double>>& columns) {
    if (header.size() != columns.size())
        throw std::invalid_argument("write_table: header/column count mismatch");
    std::ofstream out = open_out(path);
    for (std::size_t j = 0; j < header.size(); ++j)
        out << header[j] << (j + 1 < header.size() ? ',' : '\n');
    if (columns.empty()) return;
    const std::size_t rows = columns[0].size();
    for (const auto& c : columns)
        if (c.size() != rows) throw std::invalid_argument("write_table: ragged columns");
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < columns.size(); ++j)
            out << format_g15(columns[j][i]) << (j + 1 < columns.size() ? ',' : '\n');
}

}  // namespace acaf
