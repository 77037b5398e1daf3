#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace acaf {

/// An observed maxima-of-maxima series {Q_t}. Labels are optional row tags
/// (dates for ingested data); when present they align one-to-one with values.
struct MaximaSeries {
    std::vector<double> values;
    std::vector<std::string> labels;

    std::size_t size() const { return values.size(); }
    bool empty() const { return values.empty(); }

    void validate() const {
        if (values.empty()) throw std::invalid_argument("MaximaSeries: empty series");
        for (double v : values) {
            if (!std::isfinite(v)) throw std::invalid_argument("MaximaSeries: non-finite value");
        }
        if (!labels.empty() && labels.size() != values.size()) {
            throw std::invalid_argument("MaximaSeries: label/value length mismatch");
        }
    }

    double min() const {
        double m = values.front();
        for (double v : values) m = v < m ? v : m;
        return m;
    }
};

}  // namespace acaf
