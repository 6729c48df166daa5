#include "spinj/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>

#include <Eigen/Geometry>

#include "spinj/classical.hpp"
#include "spinj/covariant_sim.hpp"
#include "spinj/errors.hpp"
#include "spinj/global_bounds.hpp"
#include "spinj/local_bounds.hpp"
#include "spinj/spin_core.hpp"
#include "spinj/state_families.hpp"

namespace spinj {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr Complex kI{0.0, 1.0};

double max_abs(const Operator& a) { return a.size() ? a.cwiseAbs().maxCoeff() : 0.0; }

std::string sci(double v) {
    std::ostringstream os;
    os.precision(3);
    os << std::scientific << v;
    return os.str();
}

class Suite {
public:
    explicit Suite(bool inject_fault) : inject_fault_(inject_fault) {}

    // Passes iff the worst error returned by `fn` is within `tol`.
    void within(const std::string& module, const std::string& name, double tol,
                const std::function<double()>& fn) {
        run(module, name, [&]() -> std::pair<bool, std::string> {
            double worst = fn();
            if (inject_fault_ && results_.empty()) worst = 1.0 + tol * 10.0;
            const bool ok = std::isfinite(worst) && worst <= tol;
            return {ok, "max err " + sci(worst) + " (tol " + sci(tol) + ")"};
        });
    }

    // Passes iff `fn` returns an empty failure message.
    void holds(const std::string& module, const std::string& name,
               const std::function<std::string()>& fn) {
        run(module, name, [&]() -> std::pair<bool, std::string> {
            const std::string failure = fn();
            return {failure.empty(), failure.empty() ? "ok" : failure};
        });
    }

    std::vector<CheckResult> take() { return std::move(results_); }

private:
    void run(const std::string& module, const std::string& name,
             const std::function<std::pair<bool, std::string>()>& body) {
        CheckResult r{module, name, false, {}};
        try {
            auto [ok, detail] = body();
            r.passed = ok;
            r.detail = std::move(detail);
        } catch (const std::exception& e) {
            r.detail = std::string("exception: ") + e.what();
        }
        results_.push_back(std::move(r));
    }

    bool inject_fault_;
    std::vector<CheckResult> results_;
};

std::vector<WeightDistribution> sample_families(int n, std::mt19937_64& rng) {
    const SpinSystem sys(n);
    std::vector<WeightDistribution> out = {binomial_weights(sys, 0.6), binomial_weights(sys, 0.8),
                                           geometric_weights(sys, 2.0), geometric_weights(sys, 0.7),
                                           delta_weights(sys, sys.m_of(n / 2 + (n % 2)))};
    std::uniform_real_distribution<double> unit(0.05, 1.0);
    std::vector<double> w(static_cast<std::size_t>(n + 1));
    for (auto& x : w) x = unit(rng);
    out.push_back(custom_weights(sys, w, true));
    return out;
}

Operator random_generator(const SpinSystem& sys, double a, double b, double c) {
    return a * angular_momentum(sys, Axis::X) + b * angular_momentum(sys, Axis::Y) +
           c * angular_momentum(sys, Axis::Z);
}

}  // namespace

bool all_passed(const std::vector<CheckResult>& results) {
    return std::all_of(results.begin(), results.end(), [](const CheckResult& r) { return r.passed; });
}

std::vector<CheckResult> run_verification(const VerifyOptions& opt) {
    Suite s(opt.inject_fault);
    const int max_n = std::max(opt.max_n, 1);
    const int small_n = std::min(max_n, 10);
    std::mt19937_64 rng(20240611);
    std::uniform_real_distribution<double> angle(-kPi, kPi);

    // ---- spin-core
    const auto commutator_check = [&](Axis a, Axis b, Axis c) {
        return [=] {
            double worst = 0.0;
            for (int n = 0; n <= max_n; ++n) {
                const SpinSystem sys(n);
                const Operator x = angular_momentum(sys, a), y = angular_momentum(sys, b);
                worst = std::max(worst, max_abs(x * y - y * x - kI * angular_momentum(sys, c)));
            }
            return worst;
        };
    };
    s.within("spin-core", "commutator [J1,J2] = iJ3", 1e-10, commutator_check(Axis::X, Axis::Y, Axis::Z));
    s.within("spin-core", "commutator [J2,J3] = iJ1", 1e-10, commutator_check(Axis::Y, Axis::Z, Axis::X));
    s.within("spin-core", "commutator [J3,J1] = iJ2", 1e-10, commutator_check(Axis::Z, Axis::X, Axis::Y));
    s.within("spin-core", "casimir = j(j+1) I", 1e-10, [&] {
        double worst = 0.0;
        for (int n = 0; n <= max_n; ++n) {
            const SpinSystem sys(n);
            const auto d = sys.dim();
            worst = std::max(worst, max_abs(casimir(sys) - sys.j() * (sys.j() + 1.0) * Operator::Identity(d, d)));
        }
        return worst;
    });
    s.within("spin-core", "ladder adjoint J+^dagger = J-", 0.0, [&] {
        double worst = 0.0;
        for (int n = 0; n <= max_n; ++n) {
            const SpinSystem sys(n);
            worst = std::max(worst, max_abs(ladder_plus(sys).adjoint() - ladder_minus(sys)));
        }
        return worst;
    });
    s.within("spin-core", "angular momentum Hermitian, J3 = diag(m)", 1e-12, [&] {
        double worst = 0.0;
        for (int n = 0; n <= max_n; ++n) {
            const SpinSystem sys(n);
            for (Axis ax : {Axis::X, Axis::Y, Axis::Z}) {
                const Operator a = angular_momentum(sys, ax);
                worst = std::max(worst, max_abs(a - a.adjoint()));
            }
            const Operator jz = angular_momentum(sys, Axis::Z);
            for (Eigen::Index k = 0; k < sys.dim(); ++k) worst = std::max(worst, std::abs(jz(k, k) - sys.m_of(k)));
        }
        return worst;
    });
    s.within("spin-core", "projectors idempotent", 1e-10, [&] {
        double worst = 0.0;
        for (int n = 1; n <= max_n; ++n) {
            const auto p = coupling_projectors(SpinSystem(n));
            worst = std::max({worst, max_abs(p.p_plus * p.p_plus - p.p_plus), max_abs(p.p_minus * p.p_minus - p.p_minus)});
        }
        return worst;
    });
    s.within("spin-core", "projectors complete and orthogonal", 1e-10, [&] {
        double worst = 0.0;
        for (int n = 1; n <= max_n; ++n) {
            const auto p = coupling_projectors(SpinSystem(n));
            const auto d = p.p_plus.rows();
            worst = std::max({worst, max_abs(p.p_plus + p.p_minus - Operator::Identity(d, d)),
                              max_abs(p.p_plus * p.p_minus)});
        }
        return worst;
    });
    s.within("spin-core", "projector traces n+2, n", 1e-10, [&] {
        double worst = 0.0;
        for (int n = 1; n <= max_n; ++n) {
            const auto p = coupling_projectors(SpinSystem(n));
            worst = std::max({worst, std::abs(p.p_plus.trace() - Complex(n + 2.0)),
                              std::abs(p.p_minus.trace() - Complex(n))});
        }
        return worst;
    });
    s.within("spin-core", "coupled projectors commute with U_1/2 (x) U_j", 1e-9, [&] {
        double worst = 0.0;
        const SpinSystem half(1);
        for (int n = 1; n <= small_n; ++n) {
            const SpinSystem sys(n);
            const auto p = coupling_projectors(sys);
            for (int t = 0; t < 20; ++t) {
                const double a = angle(rng), b = angle(rng), c = angle(rng);
                const Operator u = kron(exp_i_hermitian(random_generator(half, a, b, c)),
                                        exp_i_hermitian(random_generator(sys, a, b, c)));
                worst = std::max({worst, max_abs(u * p.p_plus - p.p_plus * u), max_abs(u * p.p_minus - p.p_minus * u)});
            }
        }
        return worst;
    });
    s.within("spin-core", "exp_i_hermitian unitary, |det| = 1", 1e-10, [&] {
        double worst = 0.0;
        for (int n = 0; n <= max_n; ++n) {
            const SpinSystem sys(n);
            const Operator u = exp_i_hermitian(random_generator(sys, angle(rng), angle(rng), angle(rng)));
            const auto d = sys.dim();
            worst = std::max({worst, max_abs(u * u.adjoint() - Operator::Identity(d, d)),
                              std::abs(std::abs(u.determinant()) - 1.0)});
        }
        return worst;
    });
    s.within("spin-core", "spin-1/2 rotation closed form", 1e-12, [&] {
        double worst = 0.0;
        for (int t = 0; t < 50; ++t) {
            const ParamPoint th = ParamPoint::from_polar(std::abs(angle(rng)), angle(rng));
            const double c = std::cos(0.5 * th.norm()), sn = std::sin(0.5 * th.norm());
            Operator expect(2, 2);
            expect << c, kI * std::polar(1.0, -th.phi()) * sn, kI * std::polar(1.0, th.phi()) * sn, c;
            worst = std::max(worst, max_abs(rotation(SpinSystem(1), th.theta1(), th.theta2()) - expect));
        }
        return worst;
    });
    s.within("spin-core", "coherent expansion matches exp_i_hermitian", 1e-10, [&] {
        double worst = 0.0;
        for (int t = 0; t < 100; ++t) {
            const int n = 1 + t % max_n;
            const SpinSystem sys(n);
            const ParamPoint th = ParamPoint::from_polar(std::abs(angle(rng)), angle(rng));
            const CVector ref = rotation(sys, th.theta1(), th.theta2()).col(sys.dim() - 1);
            worst = std::max(worst, (coherent_state(sys, th) - ref).cwiseAbs().maxCoeff());
        }
        return worst;
    });

    // ---- state-families
    s.holds("state-families", "weights valid (sum 1, nonnegative) for all families", [&] {
        for (int n : {1, 2, 7, max_n, 10 * max_n, 2000}) {
            const SpinSystem sys(n);
            for (const auto& w : {binomial_weights(sys, 0.3), binomial_weights(sys, 0.75), geometric_weights(sys, 2.0),
                                  geometric_weights(sys, 0.5), delta_weights(sys, sys.m_of(n / 2))}) {
                if ((w.weights.array() < 0.0).any() || std::abs(w.weights.sum() - 1.0) > 1e-12 || !w.weights.allFinite()) {
                    return "invalid weights for " + to_string(w.family) + " n=" + std::to_string(n);
                }
            }
        }
        return std::string{};
    });
    s.within("state-families", "geometric ratio p_{m+1}/p_m = r", 1e-12, [&] {
        double worst = 0.0;
        for (double r : {0.4, 1.5, 2.0, 4.0}) {
            const auto w = geometric_weights(SpinSystem(std::max(max_n, 40)), r);
            for (Eigen::Index k = 0; k + 1 < w.weights.size(); ++k) {
                if (w.weights(k) > 0.0) worst = std::max(worst, std::abs(w.weights(k + 1) / w.weights(k) / r - 1.0));
            }
        }
        return worst;
    });
    s.within("state-families", "binomial mean of j+m is np", 1e-10, [&] {
        double worst = 0.0;
        for (int n = 1; n <= max_n; ++n) {
            const auto w = binomial_weights(SpinSystem(n), 0.6);
            double mean = 0.0;
            for (Eigen::Index k = 0; k < w.weights.size(); ++k) mean += k * w.weights(k);
            worst = std::max(worst, std::abs(mean - 0.6 * n));
        }
        return worst;
    });
    s.within("state-families", "evolved state keeps trace and spectrum", 1e-10, [&] {
        double worst = 0.0;
        for (int n = 1; n <= max_n; ++n) {
            for (const auto& w : sample_families(n, rng)) {
                const DensityState rho = diagonal_state(w);
                const DensityState out = evolved_state(rho, ParamPoint::from_polar(std::abs(angle(rng)), angle(rng)));
                RVector before = w.weights;
                std::sort(before.data(), before.data() + before.size());
                Eigen::SelfAdjointEigenSolver<Operator> eig(out.matrix, Eigen::EigenvaluesOnly);
                worst = std::max({worst, (eig.eigenvalues() - before).cwiseAbs().maxCoeff(),
                                  std::abs(out.matrix.trace() - Complex(1.0))});
            }
        }
        return worst;
    });
    s.holds("state-families", "diagonal and evolved states are valid density states", [&] {
        for (int n = 1; n <= max_n; ++n) {
            for (const auto& w : sample_families(n, rng)) {
                const DensityState rho = diagonal_state(w);
                if (!is_valid_state(rho) || !is_valid_state(evolved_state(rho, ParamPoint(0.4, -1.1)))) {
                    return "invalid state for " + to_string(w.family) + " n=" + std::to_string(n);
                }
            }
        }
        return std::string{};
    });
    s.within("state-families", "fidelity symmetric, R(t,t) = 1", 1e-12, [&] {
        double worst = 0.0;
        for (int t = 0; t < 1000; ++t) {
            const ParamPoint a = ParamPoint::from_polar(std::abs(angle(rng)), angle(rng));
            const ParamPoint b = ParamPoint::from_polar(std::abs(angle(rng)), angle(rng));
            worst = std::max({worst, std::abs(fidelity_point(a, b) - fidelity_point(b, a)),
                              std::abs(fidelity_point(a, a) - 1.0)});
        }
        return worst;
    });
    s.within("state-families", "fidelity = (1 + v.v')/2 on the Bloch sphere", 1e-10, [&] {
        double worst = 0.0;
        for (int t = 0; t < 1000; ++t) {
            const ParamPoint a = ParamPoint::from_polar(std::abs(angle(rng)), angle(rng));
            const ParamPoint b = ParamPoint::from_polar(std::abs(angle(rng)), angle(rng));
            const auto va = bloch_point(a), vb = bloch_point(b);
            const double dot = va[0] * vb[0] + va[1] * vb[1] + va[2] * vb[2];
            worst = std::max(worst, std::abs(fidelity_point(a, b) - 0.5 * (1.0 + dot)));
        }
        return worst;
    });
    s.within("state-families", "fidelity invariant under joint rotation", 1e-10, [&] {
        double worst = 0.0;
        for (int t = 0; t < 200; ++t) {
            const ParamPoint a = ParamPoint::from_polar(std::abs(angle(rng)), angle(rng));
            const ParamPoint b = ParamPoint::from_polar(std::abs(angle(rng)), angle(rng));
            // Rotate both Bloch vectors by the same random rotation (Rodrigues form).
            Eigen::Vector3d axis(angle(rng), angle(rng), angle(rng));
            axis.normalize();
            const Eigen::Matrix3d rot = Eigen::AngleAxisd(angle(rng), axis).toRotationMatrix();
            const auto apply = [&](const ParamPoint& p) {
                const auto v = bloch_point(p);
                const Eigen::Vector3d out = rot * Eigen::Vector3d(v[0], v[1], v[2]);
                return from_bloch({out(0), out(1), out(2)});
            };
            worst = std::max(worst, std::abs(fidelity_point(apply(a), apply(b)) - fidelity_point(a, b)));
        }
        return worst;
    });
    s.within("state-families", "error function ~ |theta|^2 at small angle", 1e-8, [&] {
        // 4 sin^2(t/2) = t^2 - t^4/12 + O(t^6)
        double worst = 0.0;
        for (double t : {1e-2, 3e-3, 1e-3}) {
            const double e = error_function_point(ParamPoint(0.0, t));
            worst = std::max(worst, std::abs(e - (t * t - std::pow(t, 4) / 12.0)) / (t * t));
        }
        return worst;
    });

    // ---- local-bounds
    const auto for_models = [&](int cap, const std::function<void(const WeightDistribution&, const ModelPoint&)>& fn) {
        for (int n = 1; n <= cap; ++n) {
            for (const auto& w : sample_families(n, rng)) fn(w, unitary_model_derivs(diagonal_state(w)));
        }
    };
    const int local_cap = std::min(max_n, 20);
    s.within("local-bounds", "Lyapunov residual on support", 1e-10, [&] {
        double worst = 0.0;
        for_models(local_cap, [&](const WeightDistribution&, const ModelPoint& m) {
            for (const auto& d : m.derivs) {
                const Operator l = sld_solve(m.rho, d);
                worst = std::max(worst, max_abs(0.5 * (l * m.rho.matrix + m.rho.matrix * l) - d));
            }
        });
        return worst;
    });
    s.within("local-bounds", "SLD Hermitian", 1e-12, [&] {
        double worst = 0.0;
        for_models(local_cap, [&](const WeightDistribution&, const ModelPoint& m) {
            for (const auto& l : sld_operators(m)) worst = std::max(worst, max_abs(l - l.adjoint()));
        });
        return worst;
    });
    s.within("local-bounds", "SLD Fisher symmetric PSD, off-diagonal zero", 1e-10, [&] {
        double worst = 0.0;
        for_models(local_cap, [&](const WeightDistribution&, const ModelPoint& m) {
            const RMatrix f = sld_fisher(m);
            Eigen::SelfAdjointEigenSolver<RMatrix> eig(f);
            worst = std::max({worst, (f - f.transpose()).cwiseAbs().maxCoeff(), std::max(0.0, -eig.eigenvalues().minCoeff()),
                              std::abs(f(0, 1)) / std::max(1.0, f(0, 0))});
        });
        return worst;
    });
    s.within("local-bounds", "closed-form F11 = generic SLD Fisher diagonal (relative)", 1e-9, [&] {
        double worst = 0.0;
        for_models(local_cap, [&](const WeightDistribution& w, const ModelPoint& m) {
            const RMatrix f = sld_fisher(m);
            const double ref = eq_nmi_fisher(w);
            const double scale = std::max(ref, 1e-300);
            worst = std::max({worst, std::abs(f(0, 0) - ref) / scale, std::abs(f(1, 1) - ref) / scale});
        });
        return worst;
    });
    s.within("local-bounds", "geometric SLDs proportional to J1, -J2", 1e-10, [&] {
        double worst = 0.0;
        for (int n = 1; n <= local_cap; ++n) {
            for (double r : {1.5, 2.0, 4.0}) {
                const SpinSystem sys(n);
                const auto m = unitary_model_derivs(diagonal_state(geometric_weights(sys, r)));
                const auto ls = sld_operators(m);
                const double c = 2.0 * (r - 1.0) / (r + 1.0);
                worst = std::max({worst, max_abs(ls[1] - c * angular_momentum(sys, Axis::X)),
                                  max_abs(ls[0] + c * angular_momentum(sys, Axis::Y))});
            }
        }
        return worst;
    });
    s.holds("local-bounds", "geometric family D-invariant", [&] {
        for (int n = 1; n <= local_cap; ++n) {
            for (double r : {1.5, 2.0, 4.0}) {
                const auto m = unitary_model_derivs(diagonal_state(geometric_weights(SpinSystem(n), r)));
                const auto res = d_invariance_check(m, sld_operators(m));
                if (!res.holds) return "residual " + sci(res.residual) + " at n=" + std::to_string(n);
            }
        }
        return std::string{};
    });
    s.within("local-bounds", "RLD inverse = F^-1 + (i/2) F^-1 D F^-1 (geometric)", 1e-8, [&] {
        double worst = 0.0;
        for (int n = 1; n <= local_cap; ++n) {
            for (double r : {1.5, 2.0, 4.0}) {
                const auto m = unitary_model_derivs(diagonal_state(geometric_weights(SpinSystem(n), r)));
                const auto ls = sld_operators(m);
                const RMatrix finv = invert_fisher(sld_fisher(m, ls));
                const CMatrix expect = finv.cast<Complex>() + 0.5 * kI * (finv * d_matrix(m, ls) * finv).cast<Complex>();
                worst = std::max(worst, (invert_fisher(rld_fisher(m)) - expect).cwiseAbs().maxCoeff());
            }
        }
        return worst;
    });
    s.within("local-bounds", "D matrix antisymmetric", 1e-9, [&] {
        double worst = 0.0;
        for_models(local_cap, [&](const WeightDistribution&, const ModelPoint& m) {
            const RMatrix d = d_matrix(m, sld_operators(m));
            worst = std::max(worst, (d + d.transpose()).cwiseAbs().maxCoeff());
        });
        return worst;
    });
    s.within("local-bounds", "D superoperator defining equation", 1e-10, [&] {
        double worst = 0.0;
        for_models(local_cap, [&](const WeightDistribution&, const ModelPoint& m) {
            for (const auto& l : sld_operators(m)) {
                const Operator d = d_superoperator(m.rho, l);
                const Operator lhs = kI * (l * m.rho.matrix - m.rho.matrix * l);
                worst = std::max(worst, max_abs(0.5 * (m.rho.matrix * d + d * m.rho.matrix) - lhs));
            }
        });
        return worst;
    });
    s.within("local-bounds", "RLD residual and Hermitian RLD Fisher", 1e-10, [&] {
        double worst = 0.0;
        for_models(local_cap, [&](const WeightDistribution& w, const ModelPoint& m) {
            if ((w.weights.array() <= 0.0).any()) return;
            for (const auto& d : m.derivs) {
                const Operator lt = rld_solve(m.rho, d);
                worst = std::max(worst, max_abs(m.rho.matrix * lt - d));
            }
            const CMatrix ft = rld_fisher(m);
            worst = std::max(worst, (ft - ft.adjoint()).cwiseAbs().maxCoeff() / std::max(1.0, ft.cwiseAbs().maxCoeff()));
        });
        return worst;
    });
    s.within("local-bounds", "Re Z(X*) = F^-1 and X* constraint", 1e-9, [&] {
        double worst = 0.0;
        for_models(local_cap, [&](const WeightDistribution&, const ModelPoint& m) {
            const auto ls = sld_operators(m);
            const RMatrix f = sld_fisher(m, ls);
            const auto xs = hn_upper_from_x_star(m, f, ls, RMatrix::Identity(2, 2));
            const RMatrix finv = invert_fisher(f);
            worst = std::max({worst, (xs.z.real() - finv).cwiseAbs().maxCoeff() / std::max(1.0, finv.cwiseAbs().maxCoeff()),
                              xs.constraint_residual});
        });
        return worst;
    });
    s.holds("local-bounds", "ordering sld <= rld <= 2 sld and sld <= hn <= 2 sld", [&] {
        std::string failure;
        for_models(local_cap, [&](const WeightDistribution& w, const ModelPoint& m) {
            const auto rep = bounds_report(m, RMatrix::Identity(2, 2));
            const double sb = rep.sld_bound, tol = 1e-8 * sb;
            if (rep.hn_upper_from_x_star < sb - tol || rep.hn_upper_from_x_star > 2 * sb + tol) {
                failure = "hn out of range for " + to_string(w.family) + " n=" + std::to_string(w.sys.n());
            }
            if (rep.rld_bound && rep.d_invariant && (*rep.rld_bound < sb - tol || *rep.rld_bound > 2 * sb + tol)) {
                failure = "rld out of range for " + to_string(w.family) + " n=" + std::to_string(w.sys.n());
            }
        });
        return failure;
    });
    s.within("local-bounds", "geometric: RLD bound = X* value = D-invariant closed form", 1e-8, [&] {
        double worst = 0.0;
        for (int n = 1; n <= local_cap; ++n) {
            const auto m = unitary_model_derivs(diagonal_state(geometric_weights(SpinSystem(n), 2.0)));
            const auto rep = bounds_report(m, RMatrix::Identity(2, 2));
            worst = std::max({worst, std::abs(rep.hn_upper_from_x_star - *rep.rld_bound) / *rep.rld_bound,
                              std::abs(*rep.hn_d_invariant - *rep.rld_bound) / *rep.rld_bound});
        }
        return worst;
    });
    s.holds("local-bounds", "RLD refused on singular state", [&] {
        const auto m = unitary_model_derivs(diagonal_state(delta_weights(SpinSystem(max_n), -0.5 * max_n)));
        try {
            rld_fisher(m);
        } catch (const ComputationError& e) {
            return e.reason() == reason::kRldSingular ? std::string{} : "wrong reason " + e.reason();
        }
        return std::string("no error raised");
    });

    // ---- global-bounds
    s.within("global-bounds", "slice completeness (2j+2) lhs + 2j rhs = 1", 1e-10, [&] {
        double worst = 0.0;
        for (int n = 1; n <= max_n; ++n) {
            for (const auto& w : sample_families(n, rng)) {
                const auto sd = bfy_sides(diagonal_state(w));
                worst = std::max(worst, std::abs((n + 2.0) * sd.lhs + n * sd.rhs - 1.0));
            }
        }
        return worst;
    });
    s.within("global-bounds", "projector R = (np+1)/(n+2) for binomial", 1e-9, [&] {
        double worst = 0.0;
        for (int n = 1; n <= max_n; ++n) {
            for (double p : {0.55, 0.75, 0.95}) {
                const DensityState rho = diagonal_state(binomial_weights(SpinSystem(n), p));
                if (bfy_holds(rho)) worst = std::max(worst, std::abs(optimal_r(rho) - binomial_r_closed(n, p)));
            }
        }
        return worst;
    });
    s.within("global-bounds", "projector R = geometric closed form", 1e-9, [&] {
        double worst = 0.0;
        for (int n = 1; n <= max_n; ++n) {
            for (double r : {1.5, 2.0, 4.0}) {
                const DensityState rho = diagonal_state(geometric_weights(SpinSystem(n), r));
                if (bfy_holds(rho)) worst = std::max(worst, std::abs(optimal_r(rho) - geometric_r_closed(n, r)));
            }
        }
        return worst;
    });
    s.within("global-bounds", "projector R = delta closed form", 1e-9, [&] {
        double worst = 0.0;
        for (int n = 1; n <= max_n; ++n) {
            const SpinSystem sys(n);
            for (Eigen::Index k = 0; k < sys.dim(); ++k) {
                const double a = sys.m_of(k);
                if (a < 0.0) continue;
                worst = std::max(worst, std::abs(optimal_r(diagonal_state(delta_weights(sys, a))) - delta_r_closed(n, a)));
            }
        }
        return worst;
    });
    s.holds("global-bounds", "delta coupling condition holds iff a >= 0", [&] {
        for (int n = 1; n <= max_n; ++n) {
            const SpinSystem sys(n);
            for (Eigen::Index k = 0; k < sys.dim(); ++k) {
                const double a = sys.m_of(k);
                if (bfy_holds(diagonal_state(delta_weights(sys, a))) != (a >= 0.0)) {
                    return "mismatch at n=" + std::to_string(n) + " a=" + std::to_string(a);
                }
            }
        }
        return std::string{};
    });
    s.within("global-bounds", "geometric expansion remainder <= 16r/((r-1)n^3)", 0.0, [&] {
        double worst = 0.0;
        for (int n : {50, 100, 200, 400}) {
            for (double r : {1.5, 2.0, 4.0}) {
                const double diff = std::abs(eta_from_r(geometric_r_closed(n, r)) - geometric_eta_expansion(n, r));
                const double bound = 16.0 * r / ((r - 1.0) * n * double(n) * n);
                worst = std::max(worst, diff - bound);
            }
        }
        return std::max(worst, 0.0);
    });
    s.holds("global-bounds", "half-Dicke: eta >= 1.9 while n^2 sld_bound stays bounded", [&] {
        for (int n : {std::max(2, 2 * (max_n / 2)), 100, 150, 200}) {
            const auto w = delta_weights(SpinSystem(n), 0.0);
            const double eta = eta_from_r(optimal_r(diagonal_state(w)));
            const double scaled = double(n) * n * sld_bound(sld_fisher(unitary_model_derivs(diagonal_state(w))), RMatrix::Identity(2, 2));
            if (n >= 100 && eta < 1.9) return "eta " + std::to_string(eta) + " at n=" + std::to_string(n);
            if (scaled > 4.0 || std::abs(scaled - 4.0 * n / (n + 2.0)) > 1e-9) return "n^2 sld " + std::to_string(scaled) + " at n=" + std::to_string(n);
        }
        return std::string{};
    });
    s.holds("global-bounds", "optimal_r refuses outside the coupling condition", [&] {
        try {
            optimal_r(diagonal_state(delta_weights(SpinSystem(4), -1.0)));
        } catch (const ComputationError& e) {
            return e.reason() == reason::kBfyFails ? std::string{} : "wrong reason " + e.reason();
        }
        return std::string("no error raised");
    });

    // ---- classical-baselines
    const int classical_cap = std::max(max_n, 10) * 5;
    s.within("classical-baselines", "var(k) = F_theta (exponential family)", 1e-10, [&] {
        double worst = 0.0;
        for (int n = 1; n <= std::min(classical_cap, 200); ++n) {
            for (double t : {-2.0, -1.0, -0.1, 0.0, 0.1, 1.0, 2.0}) {
                const auto mom = GeometricClassicalModel{n, t}.exact_moments();
                worst = std::max(worst, std::abs(mom.variance - geometric_fisher_natural(n, t)) / std::max(1.0, mom.variance));
            }
        }
        return worst;
    });
    s.within("classical-baselines", "expectation parameter = exact mean", 1e-10, [&] {
        double worst = 0.0;
        for (int n = 1; n <= std::min(classical_cap, 200); ++n) {
            for (double t : {-2.0, -1.0, -0.1, 0.0, 0.1, 1.0, 2.0}) {
                const auto mom = GeometricClassicalModel{n, t}.exact_moments();
                worst = std::max(worst, std::abs(mom.mean - geometric_expectation_param(n, t)) / std::max(1.0, mom.mean));
            }
        }
        return worst;
    });
    s.within("classical-baselines", "k/n unbiased with variance p(1-p)/n", 1e-12, [&] {
        double worst = 0.0;
        for (int n = 1; n <= std::min(classical_cap, 200); ++n) {
            for (double p : {0.1, 0.5, 0.75}) {
                const auto mom = binomial_estimator_moments(n, p);
                worst = std::max({worst, std::abs(mom.mean - p), std::abs(mom.variance - binomial_direct_mse(n, p))});
            }
        }
        return worst;
    });
    s.within("classical-baselines", "number-basis measurement of geometric probe = P_theta", 1e-12, [&] {
        double worst = 0.0;
        for (int n = 1; n <= max_n; ++n) {
            for (double r : {0.5, 2.0, 3.0}) {
                const DensityState rho = diagonal_state(geometric_weights(SpinSystem(n), r));
                const RVector pt = GeometricClassicalModel{n, std::log(r)}.probabilities();
                worst = std::max(worst, (rho.matrix.diagonal().real() - pt).cwiseAbs().maxCoeff());
            }
        }
        return worst;
    });

    // ---- covariant-sim
    const long mc = std::max(opt.mc_samples, 1000L);
    s.holds("covariant-sim", "outcome density integrates to 1 (quadrature)", [&] {
        // (2j+1)/(4 pi) * integral of the acceptance over the sphere must be 1.
        for (int n : {1, 2, std::min(max_n, 6)}) {
            const OutcomeSampler sampler(evolved_state(diagonal_state(geometric_weights(SpinSystem(n), 2.0)), ParamPoint(0.3, 0.2)));
            const int nt = 200, np = 200;
            double integral = 0.0;
            for (int a = 0; a < nt; ++a) {
                const double polar = kPi * (a + 0.5) / nt;
                for (int b = 0; b < np; ++b) {
                    const double az = 2.0 * kPi * (b + 0.5) / np;
                    integral += sampler.acceptance(ParamPoint::from_polar(polar, az)) * std::sin(polar);
                }
            }
            integral *= (kPi / nt) * (2.0 * kPi / np) * (n + 1.0) / (4.0 * kPi);
            if (std::abs(integral - 1.0) > 1e-4) return "integral " + std::to_string(integral) + " at n=" + std::to_string(n);
        }
        return std::string{};
    });
    s.holds("covariant-sim", "acceptance rate within 5 sigma of 1/(2j+1)", [&] {
        const int n = std::min(max_n, 4);
        const SimConfig cfg{geometric_weights(SpinSystem(n), 2.0), ParamPoint(0.5, 0.1), mc, 11, opt.threads};
        const auto res = average_fidelity(cfg);
        const double p = 1.0 / (n + 1.0);
        const double sigma = std::sqrt(p * (1.0 - p) / static_cast<double>(res.proposals));
        const double rate = static_cast<double>(res.samples_used) / static_cast<double>(res.proposals);
        return std::abs(rate - p) <= 5.0 * sigma ? std::string{} : "rate " + std::to_string(rate);
    });
    s.holds("covariant-sim", "empirical mean fidelity within 3 sigma of analytic R", [&] {
        const int n = std::min(max_n, 6);
        const auto w = binomial_weights(SpinSystem(n), 0.8);
        const auto res = average_fidelity({w, ParamPoint(-0.7, 1.2), mc, 5, opt.threads});
        const double analytic = optimal_r(diagonal_state(w));
        return std::abs(res.mean_fidelity - analytic) <= 3.0 * res.std_error
                   ? std::string{}
                   : "mean " + std::to_string(res.mean_fidelity) + " vs " + std::to_string(analytic);
    });
    s.holds("covariant-sim", "seed determinism independent of threads", [&] {
        const auto w = geometric_weights(SpinSystem(std::min(max_n, 3)), 2.0);
        const auto a = average_fidelity({w, ParamPoint(0.1, 0.2), 2000, 99, 1});
        const auto b = average_fidelity({w, ParamPoint(0.1, 0.2), 2000, 99, 4});
        return a.mean_fidelity == b.mean_fidelity && a.std_error == b.std_error && a.proposals == b.proposals
                   ? std::string{}
                   : std::string("results differ");
    });

    return s.take();
}

}  // namespace spinj
