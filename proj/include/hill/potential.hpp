#ifndef HILL_POTENTIAL_HPP
#define HILL_POTENTIAL_HPP

// Complex 2pi-periodic potentials: finite Fourier series, the closed-form
// one-sided family q_m(x) = 2 m^2 a e^{imx} / (a e^{imx} + 1)^2, translated
// wrappers, and the zero potential.  Values are immutable after
// construction and safe to share across threads.

#include <cmath>
#include <complex>
#include <map>
#include <memory>
#include <string>
#include <utility>

#include <json.hpp>

#include "hill/complexfn.hpp"
#include "hill/errors.hpp"
#include "hill/quadrature.hpp"

namespace hill {

enum class PotentialKind { zero, fourier, gasymov, shifted };

struct PotentialSummary {
    cplx mean{0.0, 0.0};
    bool is_gasymov_onesided = false;  // all frequencies > 0 or all < 0
    int fourier_truncation = 0;        // max |n| of the stored expansion
};

class Potential {
public:
    Potential() : kind_(PotentialKind::zero) {}

    static Potential zero() { return Potential(); }

    static Potential fourier(std::map<int, cplx> coeffs) {
        Potential p;
        p.kind_ = PotentialKind::fourier;
        for (auto it = coeffs.begin(); it != coeffs.end();) {
            if (it->second == cplx(0.0, 0.0))
                it = coeffs.erase(it);
            else
                ++it;
        }
        p.coeffs_ = std::move(coeffs);
        if (p.coeffs_.empty()) p.kind_ = PotentialKind::zero;
        return p;
    }

    // q_m(x) = 2 m^2 a e^{imx} / (a e^{imx} + 1)^2.  The parameter circle
    // |a| = 1 puts a pole on the real axis and is rejected.
    static Potential gasymov(int m, cplx a) {
        if (m < 1)
            throw Error(ErrorCode::bad_argument, "gasymov: m must be >= 1");
        if (a == cplx(0.0, 0.0))
            throw Error(ErrorCode::pole_on_real_axis, "gasymov: a must be nonzero");
        if (std::abs(std::abs(a) - 1.0) <= 1e-12)
            throw Error(ErrorCode::pole_on_real_axis,
                        "gasymov: |a| = 1 places a pole on the real axis");
        Potential p;
        p.kind_ = PotentialKind::gasymov;
        p.m_ = m;
        p.a_ = a;
        return p;
    }

    // Wrapper evaluating base(x + xi); kept as its own variant so JSON
    // documents round-trip structurally.  shift() below folds instead.
    static Potential shifted(Potential base, cplx xi) {
        validate_shift(base, xi);
        Potential p;
        p.kind_ = PotentialKind::shifted;
        p.base_ = std::make_shared<Potential>(std::move(base));
        p.xi_ = xi;
        return p;
    }

    PotentialKind kind() const { return kind_; }

    cplx evaluate(double x) const { return evaluate_c(cplx(x, 0.0)); }

    cplx evaluate_c(cplx z) const {
        switch (kind_) {
            case PotentialKind::zero:
                return 0.0;
            case PotentialKind::fourier: {
                cplx sum = 0.0;
                for (const auto& [n, c] : coeffs_)
                    sum += c * std::exp(cplx(0.0, 1.0) * double(n) * z);
                return sum;
            }
            case PotentialKind::gasymov: {
                const cplx w =
                    a_ * std::exp(cplx(0.0, 1.0) * double(m_) * z);
                const cplx d = w + 1.0;
                return 2.0 * double(m_) * double(m_) * w / (d * d);
            }
            case PotentialKind::shifted:
                return base_->evaluate_c(z + xi_);
        }
        return 0.0;
    }

    // <q> = (1/2pi) int_0^{2pi} q.  Exact for fourier/gasymov/zero;
    // adaptive quadrature for shifted wrappers (which matters when the
    // wrapped function is only meromorphic in x).
    cplx mean() const {
        switch (kind_) {
            case PotentialKind::zero:
                return 0.0;
            case PotentialKind::fourier: {
                auto it = coeffs_.find(0);
                return it == coeffs_.end() ? cplx(0.0) : it->second;
            }
            case PotentialKind::gasymov:
                return 0.0;
            case PotentialKind::shifted:
                return integrate_adaptive(
                           [this](double x) { return evaluate(x); }, 0.0,
                           two_pi, 1e-14) /
                       two_pi;
        }
        return 0.0;
    }

    // Q(x) = int_0^x q; Q(0) = 0.
    cplx antiderivative(double x) const {
        switch (kind_) {
            case PotentialKind::zero:
                return 0.0;
            case PotentialKind::fourier: {
                cplx sum = 0.0;
                for (const auto& [n, c] : coeffs_) {
                    if (n == 0) {
                        sum += c * x;
                    } else {
                        const cplx in(0.0, double(n));
                        sum += c * (std::exp(in * x) - 1.0) / in;
                    }
                }
                return sum;
            }
            case PotentialKind::gasymov: {
                const cplx w =
                    a_ * std::exp(cplx(0.0, double(m_)) * x);
                return cplx(0.0, 2.0 * double(m_)) *
                       (1.0 / (w + 1.0) - 1.0 / (a_ + 1.0));
            }
            case PotentialKind::shifted:
                return integrate_adaptive(
                    [this](double t) { return evaluate(t); }, 0.0, x, 1e-14);
        }
        return 0.0;
    }

    // Translation q(. + xi), folded into closed form per variant.
    Potential shift(cplx xi) const {
        switch (kind_) {
            case PotentialKind::zero:
                return zero();
            case PotentialKind::fourier: {
                std::map<int, cplx> shifted_coeffs;
                for (const auto& [n, c] : coeffs_)
                    shifted_coeffs[n] =
                        c * std::exp(cplx(0.0, 1.0) * double(n) * xi);
                return fourier(std::move(shifted_coeffs));
            }
            case PotentialKind::gasymov:
                return gasymov(
                    m_, a_ * std::exp(cplx(0.0, 1.0) * double(m_) * xi));
            case PotentialKind::shifted:
                return base_->shift(xi_ + xi);
        }
        return zero();
    }

    PotentialSummary summary() const {
        if (kind_ == PotentialKind::shifted) return shift(0.0).summary();
        PotentialSummary s;
        s.mean = mean();
        switch (kind_) {
            case PotentialKind::zero:
                s.is_gasymov_onesided = true;  // empty expansion
                break;
            case PotentialKind::gasymov:
                s.is_gasymov_onesided = true;
                break;
            case PotentialKind::fourier: {
                bool all_pos = true, all_neg = true;
                for (const auto& [n, c] : coeffs_) {
                    (void)c;
                    s.fourier_truncation =
                        std::max(s.fourier_truncation, std::abs(n));
                    if (n <= 0) all_pos = false;
                    if (n >= 0) all_neg = false;
                }
                s.is_gasymov_onesided = all_pos || all_neg;
                break;
            }
            default:
                break;
        }
        return s;
    }

    const std::map<int, cplx>& fourier_coeffs() const { return coeffs_; }
    int gasymov_m() const { return m_; }
    cplx gasymov_a() const { return a_; }
    const Potential& base() const { return *base_; }
    cplx shift_xi() const { return xi_; }

    nlohmann::json to_json() const {
        nlohmann::json j;
        switch (kind_) {
            case PotentialKind::zero:
                j["type"] = "zero";
                break;
            case PotentialKind::fourier: {
                j["type"] = "fourier";
                auto arr = nlohmann::json::array();
                for (const auto& [n, c] : coeffs_)
                    arr.push_back(nlohmann::json::array(
                        {n, nlohmann::json::array({c.real(), c.imag()})}));
                j["coeffs"] = arr;
                break;
            }
            case PotentialKind::gasymov:
                j["type"] = "gasymov";
                j["m"] = m_;
                j["a"] = {a_.real(), a_.imag()};
                break;
            case PotentialKind::shifted:
                j["type"] = "shifted";
                j["base"] = base_->to_json();
                j["xi"] = {xi_.real(), xi_.imag()};
                break;
        }
        return j;
    }

    static Potential from_json(const nlohmann::json& j) {
        const std::string type = j.at("type").get<std::string>();
        if (type == "zero") return zero();
        if (type == "fourier") {
            std::map<int, cplx> coeffs;
            for (const auto& entry : j.at("coeffs")) {
                const int n = entry.at(0).get<int>();
                coeffs[n] = cplx(entry.at(1).at(0).get<double>(),
                                 entry.at(1).at(1).get<double>());
            }
            return fourier(std::move(coeffs));
        }
        if (type == "gasymov") {
            return gasymov(j.at("m").get<int>(),
                           cplx(j.at("a").at(0).get<double>(),
                                j.at("a").at(1).get<double>()));
        }
        if (type == "shifted") {
            return shifted(from_json(j.at("base")),
                           cplx(j.at("xi").at(0).get<double>(),
                                j.at("xi").at(1).get<double>()));
        }
        throw Error(ErrorCode::bad_argument,
                    "unknown potential type: " + type);
    }

private:
    static void validate_shift(const Potential& base, cplx xi) {
        // The shifted potential must stay pole-free on the real axis.
        switch (base.kind_) {
            case PotentialKind::gasymov: {
                const cplx a_shifted =
                    base.a_ *
                    std::exp(cplx(0.0, 1.0) * double(base.m_) * xi);
                if (std::abs(std::abs(a_shifted) - 1.0) <= 1e-12)
                    throw Error(ErrorCode::pole_on_real_axis,
                                "shift: gasymov parameter lands on |a| = 1");
                break;
            }
            case PotentialKind::shifted:
                validate_shift(*base.base_, base.xi_ + xi);
                break;
            default:
                break;  // entire in x, any shift is fine
        }
    }

    PotentialKind kind_;
    std::map<int, cplx> coeffs_;
    int m_ = 0;
    cplx a_{0.0, 0.0};
    std::shared_ptr<const Potential> base_;
    cplx xi_{0.0, 0.0};
};

}  // namespace hill

#endif
