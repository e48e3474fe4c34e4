#ifndef HILL_EIGENSOLVER_HPP
#define HILL_EIGENSOLVER_HPP

// Zeros of the spectral entire functions Delta -+ 2, v(2pi; .), u'(2pi; .):
// argument-principle counting on circles and on egg contours
// |sqrt(lambda) - n/2| = 1/4 (the k-plane localization regions), recursive
// subdivision for the low-lying part, Newton refinement with the analytic
// lambda-derivative from the variational system, multiplicity from nested
// winding numbers, and coexistence / Jordan-anomaly classification of
// multiplier-degenerate points.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <optional>
#include <vector>

#include "hill/complexfn.hpp"
#include "hill/errors.hpp"
#include "hill/monodromy.hpp"
#include "hill/parallel.hpp"
#include "hill/potential.hpp"

namespace hill {

enum class EigKind { periodic, antiperiodic, dirichlet, neumann };
enum class Tristate { no, yes, unknown };
enum class Pathology { none, first_kind, second_kind, unknown };

struct EigenvalueRecord {
    cplx lambda{};
    int multiplicity = 1;
    EigKind kind = EigKind::dirichlet;
    Tristate coexistence = Tristate::unknown;
    Tristate jordan_anomaly = Tristate::unknown;
    Pathology pathology = Pathology::unknown;
    double residual = 0.0;  // |f(lambda)| after refinement
};

struct ContourSpec {
    cplx center{};
    double radius = 1.0;
    int n_samples = 64;
};

using SpectralFn = std::function<cplx(cplx)>;

namespace contour {

// Winding number of f along the sampled closed curve t in [0,1), doubling
// the sampling until the value stabilizes and every phase increment stays
// below the safe bound.  nullopt: a zero (near) the curve keeps the phase
// increments from settling.
inline std::optional<int> winding(const SpectralFn& f,
                                  const std::function<cplx(double)>& curve,
                                  int m0 = 64, int m_max = 16384) {
    std::optional<int> prev;
    for (int m = m0; m <= m_max; m *= 2) {
        std::vector<cplx> vals(std::size_t(m));
        parallel_for(std::size_t(m), [&](std::size_t j) {
            vals[j] = f(curve(double(j) / m));
        });
        bool bad = false;
        double total = 0.0, max_inc = 0.0;
        for (int j = 0; j < m; ++j) {
            const cplx a = vals[std::size_t(j)];
            const cplx b = vals[std::size_t((j + 1) % m)];
            if (!(std::abs(a) > 0.0) || !std::isfinite(std::abs(a))) {
                bad = true;
                break;
            }
            const double inc = std::arg(b / a);
            max_inc = std::max(max_inc, std::abs(inc));
            total += inc;
        }
        if (!bad && max_inc < 2.2) {
            const double w = total / two_pi;
            const int wi = int(std::lround(w));
            if (std::abs(w - wi) < 0.25) {
                if (prev && *prev == wi) return wi;
                prev = wi;
                continue;
            }
        }
        prev.reset();
    }
    return std::nullopt;
}

inline std::function<cplx(double)> circle(cplx center, double radius) {
    return [center, radius](double t) {
        return center + radius * std::polar(1.0, two_pi * t);
    };
}

// Image of |k - n/2| = rk under lambda = k^2: the egg-shaped region around
// the lattice point n^2/4.
inline std::function<cplx(double)> egg(int n, double rk) {
    return [n, rk](double t) {
        const cplx k = 0.5 * n + rk * std::polar(1.0, two_pi * t);
        return k * k;
    };
}

// Circle count with radius perturbation retries.
inline int count_in_disk(const SpectralFn& f, cplx center, double radius,
                         int m0 = 64) {
    for (int attempt = 0; attempt < 3; ++attempt) {
        const double factor = 1.0 + ((attempt % 2) ? -0.011 : 0.013) * attempt;
        const auto w = winding(f, circle(center, radius * factor), m0);
        if (w) return *w;
    }
    throw Error(ErrorCode::zero_on_contour,
                "winding number failed to stabilize on circle");
}

inline int count_in_egg(const SpectralFn& f, int n, int m0 = 64) {
    for (int attempt = 0; attempt < 3; ++attempt) {
        const double rk = 0.25 * (1.0 + ((attempt % 2) ? -0.009 : 0.012) * attempt);
        const auto w = winding(f, egg(n, rk), m0);
        if (w) return *w;
    }
    throw Error(ErrorCode::zero_on_contour,
                "winding number failed to stabilize on egg contour");
}

}  // namespace contour

// Argument-principle zero count inside a circular contour.
inline int count_zeros(const SpectralFn& f, const ContourSpec& spec) {
    if (!(spec.radius > 0.0))
        throw Error(ErrorCode::bad_argument, "contour radius must be > 0");
    return contour::count_in_disk(f, spec.center, spec.radius,
                                  std::max(64, spec.n_samples));
}

namespace detail {

struct ZeroHit {
    cplx lambda{};
    int multiplicity = 1;
    double residual = 0.0;
    double scale = 1.0;  // local |f'| based scale used for acceptance
};

// Locates zeros of an analytic f (derivative fp supplied) by recursive disk
// subdivision, with a fast path: Newton with multiplicity from the disk
// count, verified by a small nested contour.  Genuinely multiple zeros
// terminate in the fast path; tight-but-distinct clusters get split by
// Newton restarts around the stalled point.
class ZeroFinder {
public:
    ZeroFinder(SpectralFn f, SpectralFn fp, double acc_tol)
        : f_(std::move(f)), fp_(std::move(fp)), acc_tol_(acc_tol) {}

    std::vector<ZeroHit> in_disk(cplx center, double radius) const {
        std::vector<ZeroHit> hits;
        const int n = contour::count_in_disk(f_, center, radius);
        collect(center, radius, n, 0, hits);
        merge(hits);
        return hits;
    }

    std::optional<ZeroHit> newton_simple(cplx seed, double trust) const {
        cplx z = seed;
        for (int it = 0; it < 60; ++it) {
            const cplx fz = f_(z), dz = fp_(z);
            if (!(std::abs(dz) > 0.0)) return std::nullopt;
            const cplx step = fz / dz;
            z -= step;
            if (std::abs(z - seed) > trust) return std::nullopt;
            if (std::abs(step) < 1e-13 * (1.0 + std::abs(z))) {
                ZeroHit hit;
                hit.lambda = z;
                hit.multiplicity = 1;
                hit.residual = std::abs(f_(z));
                hit.scale = std::max(1.0, std::abs(fp_(z)) * (1.0 + std::abs(z)));
                if (hit.residual < acc_tol_ * hit.scale) return hit;
                return std::nullopt;
            }
        }
        return std::nullopt;
    }

private:
    void collect(cplx center, double radius, int n, int depth,
                 std::vector<ZeroHit>& hits) const {
        if (n == 0) return;
        if (depth > 80)
            throw Error(ErrorCode::count_mismatch,
                        "subdivision failed to resolve zeros");

        if (n == 1) {
            if (auto hit = newton_simple(center, 2.0 * radius)) {
                if (contains(center, radius, hit->lambda)) {
                    hits.push_back(*hit);
                    return;
                }
            }
        } else {
            if (refine_multiple(center, radius, n, hits)) return;
        }
        // subdivide: 4 disks of radius 0.75 r cover the disk of radius r
        const double child_r = 0.75 * radius;
        int found = 0;
        std::vector<ZeroHit> child_hits;
        for (const cplx off : {cplx(0.35, 0.35), cplx(-0.35, 0.35),
                               cplx(0.35, -0.35), cplx(-0.35, -0.35)}) {
            const cplx cc = center + radius * off;
            const int cn = contour::count_in_disk(f_, cc, child_r);
            if (cn > 0) collect(cc, child_r, cn, depth + 1, child_hits);
        }
        merge(child_hits);
        for (const auto& h : child_hits)
            if (contains(center, radius * 1.0001, h.lambda)) {
                hits.push_back(h);
                found += h.multiplicity;
            }
        if (found < n)
            throw Error(ErrorCode::count_mismatch,
                        "child disks lost zeros during subdivision");
    }

    bool refine_multiple(cplx center, double radius, int n,
                         std::vector<ZeroHit>& hits) const {
        // Newton on f with multiplicity-n step
        cplx z = center;
        double last_step = radius;
        bool converged = false;
        for (int it = 0; it < 80; ++it) {
            const cplx fz = f_(z), dz = fp_(z);
            if (!(std::abs(dz) > 0.0)) break;
            const cplx step = double(n) * fz / dz;
            z -= step;
            last_step = std::abs(step);
            if (std::abs(z - center) > 2.0 * radius) return false;
            if (last_step < 1e-11 * (1.0 + std::abs(z))) {
                converged = true;
                break;
            }
        }
        const double scale_z = 1.0 + std::abs(z);
        if (converged) {
            const double rv = std::max(1e-6 * scale_z, 1e3 * last_step);
            if (rv < radius) {
                const int cnt = contour::count_in_disk(f_, z, rv, 64);
                if (cnt == n) {
                    ZeroHit hit;
                    hit.lambda = z;
                    hit.multiplicity = n;
                    hit.residual = std::abs(f_(z));
                    hit.scale = scale_z;
                    hits.push_back(hit);
                    return true;
                }
            }
        }
        // stalled on a tight cluster: restart plain Newton around the stall
        if (last_step < 0.05 * radius) {
            std::vector<ZeroHit> found;
            const double ring = std::max(4.0 * last_step, 1e-9 * scale_z);
            for (int dir = 0; dir < 8; ++dir) {
                const cplx seed = z + ring * std::polar(1.0, two_pi * dir / 8.0);
                if (auto hit = newton_simple(seed, 4.0 * radius)) {
                    if (contains(center, radius * 1.0001, hit->lambda))
                        found.push_back(*hit);
                }
            }
            merge(found);
            int total = 0;
            for (const auto& h : found) total += h.multiplicity;
            if (total == n) {
                for (const auto& h : found) hits.push_back(h);
                return true;
            }
        }
        return false;
    }

    static bool contains(cplx center, double radius, cplx z) {
        return std::abs(z - center) <= radius;
    }

    void merge(std::vector<ZeroHit>& hits) const {
        std::sort(hits.begin(), hits.end(), [](const ZeroHit& a,
                                               const ZeroHit& b) {
            if (a.lambda.real() != b.lambda.real())
                return a.lambda.real() < b.lambda.real();
            return a.lambda.imag() < b.lambda.imag();
        });
        std::vector<ZeroHit> out;
        for (const auto& h : hits) {
            if (!out.empty() &&
                std::abs(h.lambda - out.back().lambda) <
                    1e-8 * (1.0 + std::abs(h.lambda))) {
                // same zero reached twice through overlapping disks
                if (h.residual < out.back().residual) {
                    const int mult = out.back().multiplicity;
                    out.back() = h;
                    out.back().multiplicity = std::max(mult, h.multiplicity);
                }
                continue;
            }
            out.push_back(h);
        }
        hits = std::move(out);
    }

    SpectralFn f_, fp_;
    double acc_tol_;
};

// Remove the mean so the lattice localization applies; callers shift the
// located zeros back by the removed constant.
inline std::pair<Potential, cplx> split_mean(const Potential& p) {
    Potential folded =
        (p.kind() == PotentialKind::shifted) ? p.shift(cplx(0.0)) : p;
    const cplx mu = folded.mean();
    if (mu == cplx(0.0)) return {folded, mu};
    auto coeffs = folded.fourier_coeffs();
    coeffs[0] -= mu;
    return {Potential::fourier(std::move(coeffs)), mu};
}

inline double lattice_radius(int n) {
    return (0.5 * n + 0.25) * (0.5 * n + 0.25);
}

inline bool inside_egg(cplx lambda, int n, double slack = 1e-9) {
    const cplx k = std::sqrt(lambda);
    return std::abs(k - 0.5 * n) < 0.25 + slack;
}

struct LatticeSolveResult {
    std::vector<ZeroHit> hits;
};

// Shared machinery for v(2pi;.) and u'(2pi;.): count on C_{n_max}, count
// each egg, refine single-egg zeros by Newton, and sweep the low disk
// C_B by subdivision.  extra_low: zeros expected below the lattice
// (nu_0 for the Neumann function).
inline LatticeSolveResult solve_lattice_function(const SpectralFn& f,
                                                 const SpectralFn& fp,
                                                 int n_max, double acc_tol,
                                                 int extra_low) {
    const ZeroFinder finder(f, fp, acc_tol);
    const int total =
        contour::count_in_disk(f, cplx(0.0), lattice_radius(n_max), 128);
    if (total != n_max + extra_low)
        throw Error(ErrorCode::count_mismatch,
                    "zero count inside C_n disagrees with the lattice "
                    "inventory; raise n_max or check potential smoothness");

    std::vector<int> egg_count(std::size_t(n_max) + 1, 0);
    for (int n = 1; n <= n_max; ++n)
        egg_count[std::size_t(n)] = contour::count_in_egg(f, n);

    int low_bound = 0;
    for (int n = 1; n <= n_max; ++n)
        if (egg_count[std::size_t(n)] != 1) low_bound = std::max(low_bound, n);

    LatticeSolveResult result;
    for (int n = low_bound + 1; n <= n_max; ++n) {
        // exactly one simple zero in this egg
        auto hit = finder.newton_simple(cplx(0.25 * double(n) * double(n)),
                                        0.6 * double(n) + 1.0);
        if (hit && inside_egg(hit->lambda, n)) {
            result.hits.push_back(*hit);
            continue;
        }
        // fall back to subdivision over a disk covering the egg
        const cplx cc(0.25 * double(n) * double(n) + 1.0 / 16.0);
        const double rr = 0.25 * double(n) + 1.0 / 16.0 + 1e-3;
        bool found = false;
        for (const auto& h : finder.in_disk(cc, rr)) {
            if (inside_egg(h.lambda, n)) {
                result.hits.push_back(h);
                found = true;
            }
        }
        if (!found)
            throw Error(ErrorCode::count_mismatch,
                        "egg region lost its zero during refinement");
    }

    const int expect_low = low_bound + extra_low;
    if (expect_low > 0 || low_bound > 0) {
        const double r_low = lattice_radius(low_bound);
        const int low_count = contour::count_in_disk(f, cplx(0.0), r_low);
        if (low_count != expect_low)
            throw Error(ErrorCode::count_mismatch,
                        "low-lying zero count disagrees with the egg "
                        "inventory; raise n_max");
        if (low_count > 0) {
            auto low_hits = finder.in_disk(cplx(0.0), r_low);
            for (const auto& h : low_hits) result.hits.push_back(h);
        }
    }

    int got = 0;
    for (const auto& h : result.hits) got += h.multiplicity;
    if (got != total)
        throw Error(ErrorCode::count_mismatch,
                    "assembled zero inventory disagrees with the total count");
    return result;
}

inline void sort_records(std::vector<EigenvalueRecord>& recs) {
    std::sort(recs.begin(), recs.end(),
              [](const EigenvalueRecord& a, const EigenvalueRecord& b) {
                  const double ma = std::abs(a.lambda), mb = std::abs(b.lambda);
                  if (ma != mb) return ma < mb;
                  if (a.lambda.real() != b.lambda.real())
                      return a.lambda.real() < b.lambda.real();
                  return a.lambda.imag() < b.lambda.imag();
              });
}

}  // namespace detail

// Zeros of v(2pi; lambda) sorted by |mu|.  A nonzero potential mean is
// removed internally and added back to the reported locations.
inline std::vector<EigenvalueRecord> dirichlet_spectrum(const Potential& p,
                                                        int n_max,
                                                        double tol = 1e-9) {
    const auto [p0, mu] = detail::split_mean(p);
    MonodromyEngine eng(p0);
    const double ode_tol = 1e-12;
    SpectralFn f = [&eng, ode_tol](cplx z) {
        return eng.floquet(z, ode_tol).v2pi;
    };
    SpectralFn fp = [&eng, ode_tol](cplx z) {
        return eng.variational(z, ode_tol).dv2pi_dl;
    };
    const auto res = detail::solve_lattice_function(f, fp, n_max, tol, 0);
    std::vector<EigenvalueRecord> recs;
    for (const auto& h : res.hits) {
        EigenvalueRecord r;
        r.lambda = h.lambda + mu;
        r.multiplicity = h.multiplicity;
        r.kind = EigKind::dirichlet;
        r.residual = h.residual;
        recs.push_back(r);
    }
    detail::sort_records(recs);
    return recs;
}

// Zeros of u'(2pi; lambda); the lattice carries one extra low zero nu_0.
inline std::vector<EigenvalueRecord> neumann_spectrum(const Potential& p,
                                                      int n_max,
                                                      double tol = 1e-9) {
    const auto [p0, mu] = detail::split_mean(p);
    MonodromyEngine eng(p0);
    const double ode_tol = 1e-12;
    SpectralFn f = [&eng, ode_tol](cplx z) {
        return eng.floquet(z, ode_tol).du2pi;
    };
    SpectralFn fp = [&eng, ode_tol](cplx z) {
        return eng.variational(z, ode_tol).ddu2pi_dl;
    };
    const auto res = detail::solve_lattice_function(f, fp, n_max, tol, 1);
    std::vector<EigenvalueRecord> recs;
    for (const auto& h : res.hits) {
        EigenvalueRecord r;
        r.lambda = h.lambda + mu;
        r.multiplicity = h.multiplicity;
        r.kind = EigKind::neumann;
        r.residual = h.residual;
        recs.push_back(r);
    }
    detail::sort_records(recs);
    return recs;
}

namespace detail {

inline std::vector<EigenvalueRecord> multiplier_eigenvalues(
    const Potential& p, int n_max, double tol, double sign) {
    MonodromyEngine eng(p);
    const double ode_tol = 1e-12;
    SpectralFn f = [&eng, ode_tol, sign](cplx z) {
        return eng.floquet(z, ode_tol).delta - 2.0 * sign;
    };
    SpectralFn fp = [&eng, ode_tol](cplx z) {
        return eng.variational(z, ode_tol).ddelta_dl;
    };
    const ZeroFinder finder(f, fp, tol);
    const auto hits = finder.in_disk(cplx(0.0), lattice_radius(n_max));
    std::vector<EigenvalueRecord> recs;
    for (const auto& h : hits) {
        EigenvalueRecord r;
        r.lambda = h.lambda;
        r.multiplicity = h.multiplicity;
        r.kind = sign > 0 ? EigKind::periodic : EigKind::antiperiodic;
        r.residual = h.residual;
        recs.push_back(r);
    }
    sort_records(recs);
    return recs;
}

}  // namespace detail

// Zeros of Delta - 2 inside |lambda| <= (n_max/2 + 1/4)^2.
inline std::vector<EigenvalueRecord> periodic_eigenvalues(const Potential& p,
                                                          int n_max,
                                                          double tol = 1e-9) {
    return detail::multiplier_eigenvalues(p, n_max, tol, +1.0);
}

// Zeros of Delta + 2 inside the same disk.
inline std::vector<EigenvalueRecord> antiperiodic_eigenvalues(
    const Potential& p, int n_max, double tol = 1e-9) {
    return detail::multiplier_eigenvalues(p, n_max, tol, -1.0);
}

// Classification at a multiplier-degenerate point: coexistence means
// S(lambda) = +-Identity; a degenerate non-scalar S is a Jordan block.
// Pathologies: first kind = branch point (odd-order zero of Delta^2-4)
// with coexistence; second kind = even-order zero with a Jordan anomaly.
inline EigenvalueRecord classify_point(const Potential& p, cplx lambda,
                                       double tol = 1e-6) {
    MonodromyEngine eng(p);
    const double ode_tol = 1e-12;
    const double coexist_tol = 1e-7;
    const auto fd = eng.floquet(lambda, ode_tol);
    const cplx disc2 = fd.delta * fd.delta - 4.0;
    if (std::abs(disc2) > tol)
        throw Error(ErrorCode::not_degenerate,
                    "Delta^2 - 4 is not small at this point");

    EigenvalueRecord rec;
    rec.lambda = lambda;
    const double sign = (fd.delta.real() >= 0.0) ? 1.0 : -1.0;
    rec.kind = sign > 0 ? EigKind::periodic : EigKind::antiperiodic;
    rec.residual = std::abs(disc2);

    SpectralFn f = [&eng, ode_tol](cplx z) {
        const cplx d = eng.floquet(z, ode_tol).delta;
        return d * d - 4.0;
    };
    const double r = 1e-3 * (1.0 + std::abs(lambda));
    rec.multiplicity = contour::count_in_disk(f, lambda, r, 64);

    const bool coexist = std::abs(fd.v2pi) < coexist_tol &&
                         std::abs(fd.du2pi) < coexist_tol &&
                         std::abs(fd.u2pi - sign) < coexist_tol &&
                         std::abs(fd.dv2pi - sign) < coexist_tol;
    rec.coexistence = coexist ? Tristate::yes : Tristate::no;
    rec.jordan_anomaly = coexist ? Tristate::no : Tristate::yes;

    const bool branch_point = (rec.multiplicity % 2) == 1;
    if (branch_point && coexist)
        rec.pathology = Pathology::first_kind;
    else if (!branch_point && !coexist)
        rec.pathology = Pathology::second_kind;
    else
        rec.pathology = Pathology::none;
    return rec;
}

}  // namespace hill
