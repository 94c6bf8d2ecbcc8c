#include "aportrait/smalleig.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace aportrait {

namespace {

using cplx = std::complex<double>;

constexpr double kDiscTol = 1e-12;  // repeated-root threshold on the normalized matrix
constexpr double kPi = 3.14159265358979323846;

struct CharPoly {
    // p(x) = x^n + a[n-1] x^(n-1) + ... + a[0], n in {2,3}
    int n;
    std::array<double, 3> a;

    cplx eval(cplx x) const {
        cplx r = 1.0;
        for (int i = n - 1; i >= 0; --i) r = r * x + a[static_cast<size_t>(i)];
        return r;
    }
    cplx deriv(cplx x) const {
        cplx r = static_cast<double>(n);
        for (int i = n - 1; i >= 1; --i) r = r * x + static_cast<double>(i) * a[static_cast<size_t>(i)];
        return r;
    }
};

CharPoly char_poly(const Mat& M) {
    CharPoly p;
    p.n = M.size();
    if (p.n == 2) {
        p.a = {M.det(), -M.trace(), 0.0};
    } else {
        const double c1 = (M(0, 0) * M(1, 1) - M(0, 1) * M(1, 0)) +
                          (M(0, 0) * M(2, 2) - M(0, 2) * M(2, 0)) +
                          (M(1, 1) * M(2, 2) - M(1, 2) * M(2, 1));
        p.a = {-M.det(), c1, -M.trace()};
    }
    return p;
}

void newton_polish(const CharPoly& p, cplx& x) {
    const cplx d = p.deriv(x);
    if (std::abs(d) < 1e-12) return;  // repeated root, leave as computed
    x -= p.eval(x) / d;
}

// Roots of the characteristic polynomial of a normalized matrix; sets the
// repeated-root flag that later drives defective handling.
void solve_roots(const CharPoly& p, std::array<cplx, 3>& roots, bool& repeated) {
    repeated = false;
    if (p.n == 2) {
        const double tr = -p.a[1], det = p.a[0];
        const double disc = tr * tr - 4.0 * det;
        if (std::fabs(disc) <= kDiscTol) {
            repeated = true;
            roots[0] = roots[1] = tr / 2.0;
        } else if (disc > 0) {
            const double s = std::sqrt(disc);
            const double r1 = (tr >= 0) ? 0.5 * (tr + s) : 0.5 * (tr - s);
            roots[0] = r1;
            roots[1] = (r1 != 0.0) ? det / r1 : 0.5 * (tr - s);
        } else {
            const double im = 0.5 * std::sqrt(-disc);
            roots[0] = cplx(tr / 2.0, im);
            roots[1] = cplx(tr / 2.0, -im);
        }
        return;
    }

    const double A = p.a[2], B = p.a[1], C = p.a[0];
    const double shift = -A / 3.0;
    const double pp = B - A * A / 3.0;
    const double qq = 2.0 * A * A * A / 27.0 - A * B / 3.0 + C;
    const double disc = -4.0 * pp * pp * pp - 27.0 * qq * qq;

    // the flag marks (near-)repeated roots for the eigenvector fallbacks;
    // values always come from the exact branch, which stays accurate as the
    // discriminant passes through zero
    repeated = std::fabs(disc) <= kDiscTol;

    if (disc > 0) {
        // three distinct real roots (pp < 0 here), trigonometric form
        const double m = 2.0 * std::sqrt(-pp / 3.0);
        double arg = 3.0 * qq / (pp * m);
        arg = std::clamp(arg, -1.0, 1.0);
        const double theta = std::acos(arg) / 3.0;
        for (int k = 0; k < 3; ++k)
            roots[static_cast<size_t>(k)] =
                m * std::cos(theta - 2.0 * kPi * k / 3.0) + shift;
        return;
    }
    // one real root plus a conjugate pair (collapsing to a double real root
    // as disc -> 0), Cardano with the cancellation-safe branch
    const double sq = std::sqrt(std::max(0.0, qq * qq / 4.0 + pp * pp * pp / 27.0));
    const double s = (qq >= 0) ? -qq / 2.0 - sq : -qq / 2.0 + sq;
    const double u = std::cbrt(s);
    const double v = (u != 0.0) ? -pp / (3.0 * u) : 0.0;
    const double real_root = u + v;
    const double re = -real_root / 2.0;
    const double im = std::fabs(u - v) * std::sqrt(3.0) / 2.0;
    roots[0] = real_root + shift;
    roots[1] = cplx(re + shift, im);
    roots[2] = cplx(re + shift, -im);
}

bool value_before(const cplx& a, const cplx& b) {
    if (a.real() != b.real()) return a.real() > b.real();
    return a.imag() > b.imag();
}

// Two orthonormal vectors perpendicular to r (3-vectors).
std::pair<Vec, Vec> perpendicular_pair(const Vec& r) {
    const Vec rn = r.normalized();
    Vec axis = std::fabs(rn[0]) <= std::fabs(rn[1]) && std::fabs(rn[0]) <= std::fabs(rn[2])
                   ? Vec(1, 0, 0)
                   : (std::fabs(rn[1]) <= std::fabs(rn[2]) ? Vec(0, 1, 0) : Vec(0, 0, 1));
    const Vec u = rn.cross(axis).normalized();
    const Vec v = rn.cross(u).normalized();
    return {u, v};
}

// Null direction of M - lambda*I for a real eigenvalue of a 3x3 matrix:
// cross product of the two most independent rows. Falls back to row
// perpendiculars when the rank drops (repeated eigenvalues).
std::vector<Vec> real_eigvec3(const Mat& E, int multiplicity) {
    const Vec r0 = E.row(0), r1 = E.row(1), r2 = E.row(2);
    const Vec c01 = r0.cross(r1), c02 = r0.cross(r2), c12 = r1.cross(r2);
    const Vec* best = &c01;
    if (c02.norm() > best->norm()) best = &c02;
    if (c12.norm() > best->norm()) best = &c12;

    const double row_scale = std::max({r0.norm(), r1.norm(), r2.norm()});
    if (best->norm() > 1e-10 * std::max(row_scale * row_scale, 1e-30))
        return {best->normalized()};

    // rank <= 1
    if (row_scale > 1e-12) {
        const Vec* rmax = &r0;
        if (r1.norm() > rmax->norm()) rmax = &r1;
        if (r2.norm() > rmax->norm()) rmax = &r2;
        auto [u, v] = perpendicular_pair(*rmax);
        if (multiplicity >= 2) return {u, v};
        return {u};
    }
    // rank 0: every direction is invariant
    std::vector<Vec> axes = {Vec(1, 0, 0), Vec(0, 1, 0), Vec(0, 0, 1)};
    axes.resize(static_cast<size_t>(std::min(multiplicity, 3)));
    return axes;
}

std::vector<Vec> real_eigvec2(const Mat& E, int multiplicity) {
    const Vec r0 = E.row(0), r1 = E.row(1);
    const Vec& r = r0.norm() >= r1.norm() ? r0 : r1;
    if (r.norm() > 1e-12) return {Vec(-r[1], r[0]).normalized()};
    std::vector<Vec> axes = {Vec(1, 0), Vec(0, 1)};
    axes.resize(static_cast<size_t>(std::min(multiplicity, 2)));
    return axes;
}

// Complex eigenvector for the pair member with positive imaginary part,
// orthonormalized into a spanning basis of the eigenplane.
ComplexPlane complex_plane(const Mat& M, cplx lambda) {
    const int n = M.size();
    std::array<std::array<cplx, 3>, 3> E{};
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            E[static_cast<size_t>(i)][static_cast<size_t>(j)] =
                cplx(M(i, j), 0.0) - (i == j ? lambda : cplx(0.0, 0.0));

    std::array<cplx, 3> vc{};
    if (n == 2) {
        const auto& r0 = E[0];
        const auto& r1 = E[1];
        const double n0 = std::abs(r0[0]) + std::abs(r0[1]);
        const double n1 = std::abs(r1[0]) + std::abs(r1[1]);
        const auto& r = n0 >= n1 ? r0 : r1;
        vc = {-r[1], r[0], 0.0};
    } else {
        auto cross = [](const std::array<cplx, 3>& a, const std::array<cplx, 3>& b) {
            return std::array<cplx, 3>{a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2],
                                       a[0] * b[1] - a[1] * b[0]};
        };
        auto norm = [](const std::array<cplx, 3>& a) {
            return std::sqrt(std::norm(a[0]) + std::norm(a[1]) + std::norm(a[2]));
        };
        const auto c01 = cross(E[0], E[1]);
        const auto c02 = cross(E[0], E[2]);
        const auto c12 = cross(E[1], E[2]);
        vc = c01;
        if (norm(c02) > norm(vc)) vc = c02;
        if (norm(c12) > norm(vc)) vc = c12;
    }

    Vec re = Vec::zero(n), im = Vec::zero(n);
    for (int i = 0; i < n; ++i) {
        re[i] = vc[static_cast<size_t>(i)].real();
        im[i] = vc[static_cast<size_t>(i)].imag();
    }
    // Gram-Schmidt on (Re v, Im v)
    ComplexPlane plane;
    plane.u = re.norm() > 0 ? re.normalized() : im.normalized();
    Vec w = im - plane.u * plane.u.dot(im);
    if (w.norm() > 1e-12 * std::max(1.0, im.norm())) {
        plane.v = w.normalized();
    } else if (n == 2) {
        plane.v = Vec(-plane.u[1], plane.u[0]);
    } else {
        plane.v = perpendicular_pair(plane.u).first;
    }
    return plane;
}

}  // namespace

Spectrum eigen(const Mat& M) {
    const int n = M.size();
    if (n != 2 && n != 3) throw std::invalid_argument("eigen requires a 2x2 or 3x3 matrix");
    if (!M.finite()) throw std::invalid_argument("eigen requires finite entries");

    Spectrum spec;
    spec.dimension = n;

    const double scale = M.max_abs();
    if (scale == 0.0) {
        spec.defective = true;
        for (int i = 0; i < n; ++i) {
            spec.values[static_cast<size_t>(i)] = 0.0;
            Vec axis = Vec::zero(n);
            axis[i] = 1.0;
            spec.lines[static_cast<size_t>(i)] = RealLine{axis};
        }
        return spec;
    }

    const Mat N = M * (1.0 / scale);
    const CharPoly p = char_poly(N);
    std::array<cplx, 3> roots{};
    bool repeated = false;
    solve_roots(p, roots, repeated);
    spec.defective = repeated;

    for (int i = 0; i < n; ++i) {
        cplx r = roots[static_cast<size_t>(i)];
        newton_polish(p, r);
        // keep conjugate symmetry and true real roots exact
        if (std::fabs(r.imag()) < 1e-14 * std::max(1.0, std::fabs(r.real()))) r = cplx(r.real(), 0.0);
        roots[static_cast<size_t>(i)] = r;
    }
    // re-pair the conjugates after polish
    for (int i = 0; i < n; ++i)
        if (roots[static_cast<size_t>(i)].imag() < 0)
            for (int j = 0; j < n; ++j)
                if (j != i && roots[static_cast<size_t>(j)].imag() > 0)
                    roots[static_cast<size_t>(i)] = std::conj(roots[static_cast<size_t>(j)]);

    std::sort(roots.begin(), roots.begin() + n, value_before);
    for (int i = 0; i < n; ++i) spec.values[static_cast<size_t>(i)] = roots[static_cast<size_t>(i)] * scale;

    // invariant structures on the original matrix; near-equal real roots are
    // grouped so repeated eigenvalues share the rank-aware vector extraction
    const double vscale = std::max(1.0, std::abs(spec.values[0]));
    bool pair_done = false;
    std::array<bool, 3> handled{};
    for (int i = 0; i < n; ++i) {
        if (handled[static_cast<size_t>(i)]) continue;
        const cplx lambda = spec.values[static_cast<size_t>(i)];
        if (lambda.imag() != 0.0) {
            if (!pair_done) {
                spec.plane = complex_plane(M, lambda.imag() > 0 ? lambda : std::conj(lambda));
                pair_done = true;
            }
            continue;
        }
        std::vector<int> group;
        for (int j = i; j < n; ++j) {
            if (handled[static_cast<size_t>(j)] || spec.values[static_cast<size_t>(j)].imag() != 0.0) continue;
            if (std::abs(spec.values[static_cast<size_t>(j)] - lambda) <= 1e-9 * vscale) {
                group.push_back(j);
                handled[static_cast<size_t>(j)] = true;
            }
        }

        Mat E = M;
        for (int d = 0; d < n; ++d) E(d, d) -= lambda.real();
        const int multiplicity = static_cast<int>(group.size());
        const auto vecs = (n == 3) ? real_eigvec3(E, multiplicity) : real_eigvec2(E, multiplicity);
        for (size_t vi = 0; vi < vecs.size() && vi < group.size(); ++vi)
            spec.lines[static_cast<size_t>(group[vi])] = RealLine{vecs[vi]};
    }
    return spec;
}

std::array<cplx, 3> eigen_values(const Mat& M) {
    const int n = M.size();
    const double scale = M.max_abs();
    std::array<cplx, 3> roots{};
    if (scale == 0.0) return roots;
    const Mat N = M * (1.0 / scale);
    const CharPoly p = char_poly(N);
    bool repeated = false;
    solve_roots(p, roots, repeated);
    for (int i = 0; i < n; ++i) newton_polish(p, roots[static_cast<size_t>(i)]);
    std::sort(roots.begin(), roots.begin() + n, value_before);
    for (int i = 0; i < n; ++i) roots[static_cast<size_t>(i)] *= scale;
    return roots;
}

std::array<double, 3> eigen_real_parts(const Mat& M) {
    const auto roots = eigen_values(M);
    std::array<double, 3> out{};
    for (int i = 0; i < M.size(); ++i) out[static_cast<size_t>(i)] = roots[static_cast<size_t>(i)].real();
    return out;
}

FloquetExponents floquet_from_monodromy(const FundamentalMatrix& fm) {
    const double T = fm.t1 - fm.t0;
    if (!(T > 0)) throw std::invalid_argument("monodromy window must have positive length");
    const Spectrum spec = eigen(fm.Phi);

    FloquetExponents fe;
    fe.dimension = spec.dimension;
    fe.window_length = T;
    std::array<std::pair<double, double>, 3> exps{};
    for (int i = 0; i < spec.dimension; ++i) {
        const cplx mu = spec.values[static_cast<size_t>(i)];
        const double mod = std::abs(mu);
        if (mod < 1e-300) throw std::domain_error("singular monodromy: eigenvalue modulus ~ 0");
        exps[static_cast<size_t>(i)] = {std::log(mod) / T, std::arg(mu) / T};
    }
    std::sort(exps.begin(), exps.begin() + spec.dimension,
              [](const auto& a, const auto& b) {
                  return a.first != b.first ? a.first > b.first : a.second > b.second;
              });
    for (int i = 0; i < spec.dimension; ++i) {
        fe.real_parts[static_cast<size_t>(i)] = exps[static_cast<size_t>(i)].first;
        fe.imag_parts[static_cast<size_t>(i)] = exps[static_cast<size_t>(i)].second;
    }
    return fe;
}

}  // namespace aportrait
