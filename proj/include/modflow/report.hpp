#ifndef MODFLOW_REPORT_HPP
#define MODFLOW_REPORT_HPP

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "modflow/core.hpp"

namespace modflow
{

// One verification row. A row whose evaluation raised a typed error carries a
// NaN residual, pass = false and the error kind in `error`.
struct ReportRow {
    std::string check;
    double residual = 0.0;
    double threshold = 0.0;
    bool pass = false;
    std::string error;
};

using Report = std::vector<ReportRow>;

ReportRow make_row(std::string check, double residual, double threshold);
ReportRow error_row(std::string check, const Error &e, double threshold);

// Runs `f` and turns a typed failure into an error row.
ReportRow guarded_row(const std::string &check, double threshold, const std::function<double()> &f);

bool all_pass(const Report &r);
void append(Report &dst, const Report &src);

// |a - b| / max(|a|, |b|, floor)
double rel_residual(cplx a, cplx b, double floor = 1e-300);

// std::mt19937_64 with a bit-exact uniform mapping (the standard
// distributions are implementation-defined).
class Rng
{
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}
    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }  // [0, 1)
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    cplx uniform_complex(double lo, double hi)
    {
        const double re = uniform(lo, hi);
        return {re, uniform(lo, hi)};
    }

private:
    std::mt19937_64 gen_;
};

} // namespace modflow

#endif
