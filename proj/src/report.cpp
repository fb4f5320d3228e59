#include "modflow/report.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace modflow
{

ReportRow make_row(std::string check, double residual, double threshold)
{
    ReportRow r;
    r.check = std::move(check);
    r.residual = residual;
    r.threshold = threshold;
    r.pass = std::isfinite(residual) && residual < threshold;
    return r;
}

ReportRow error_row(std::string check, const Error &e, double threshold)
{
    ReportRow r;
    r.check = std::move(check);
    r.residual = std::numeric_limits<double>::quiet_NaN();
    r.threshold = threshold;
    r.pass = false;
    r.error = std::string(to_string(e.kind()));
    return r;
}

ReportRow guarded_row(const std::string &check, double threshold, const std::function<double()> &f)
{
    try {
        return make_row(check, f(), threshold);
    } catch (const Error &e) {
        return error_row(check, e, threshold);
    }
}

bool all_pass(const Report &r)
{
    return std::all_of(r.begin(), r.end(), [](const ReportRow &x) { return x.pass; });
}

void append(Report &dst, const Report &src) { dst.insert(dst.end(), src.begin(), src.end()); }

double rel_residual(cplx a, cplx b, double floor)
{
    return std::abs(a - b) / std::max({std::abs(a), std::abs(b), floor});
}

} // namespace modflow
