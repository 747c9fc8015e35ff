#include "pvlab/field.hpp"

#include <cmath>

namespace pvlab {

double max_abs(const Field& f) {
    double m = 0.0;
    for (double x : f.v) m = std::max(m, std::fabs(x));
    return m;
}

double max_abs(const TorusField& f) {
    double m = 0.0;
    for (double x : f.v) m = std::max(m, std::fabs(x));
    return m;
}

double l2_inner(const Field& a, const Field& b) {
    const Grid& g = a.grid;
    const double h1 = g.g1.h();
    const double wt = 1.0 / (double(g.n2) * g.n3);
    double s = 0.0;
    for (int i = 0; i < g.g1.n; ++i) {
        const double w1 = (i == 0 || i == g.g1.n - 1) ? 0.5 * h1 : h1;
        double row = 0.0;
        const std::size_t off = g.idx(i, 0, 0);
        const std::size_t nslice = std::size_t(g.n2) * g.n3;
        for (std::size_t m = 0; m < nslice; ++m) row += a.v[off + m] * b.v[off + m];
        s += w1 * wt * row;
    }
    return s;
}

double l2_norm(const Field& f) { return std::sqrt(l2_inner(f, f)); }

double l2_norm(const TorusField& f) {
    double s = 0.0;
    for (double x : f.v) s += x * x;
    return std::sqrt(s / double(f.v.size()));
}

TorusField slice(const Field& f, int i) {
    TorusField s(f.grid.n2, f.grid.n3);
    const std::size_t off = f.grid.idx(i, 0, 0);
    for (std::size_t m = 0; m < s.v.size(); ++m) s.v[m] = f.v[off + m];
    return s;
}

void set_slice(Field& f, int i, const TorusField& s) {
    const std::size_t off = f.grid.idx(i, 0, 0);
    for (std::size_t m = 0; m < s.v.size(); ++m) f.v[off + m] = s.v[m];
}

} // namespace pvlab
