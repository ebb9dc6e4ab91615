#include "chronon/chronon_qm/chronon_qm.hpp"

#include "chronon/numcore/error.hpp"

#include <cmath>
#include <string>

namespace chronon::chronon_qm {

namespace {

const Complex kI(0.0, 1.0);

void require_tau(double tau) {
    if (!(tau > 0.0) || !std::isfinite(tau)) {
        throw Error("chronon_qm", "InvalidParams", "tau must be positive and finite",
                    ErrorKind::Config);
    }
}

void require_dim(const State& v, Eigen::Index n) {
    if (v.size() != n) {
        throw Error("chronon_qm", "DimensionMismatch",
                    "state has dimension " + std::to_string(v.size()) + ", Hamiltonian " +
                        std::to_string(n),
                    ErrorKind::Config);
    }
}

// ln(1 + i theta) without cancellation for small theta.
Complex log_one_plus_i(double theta) {
    return Complex(0.5 * std::log1p(theta * theta), std::atan(theta));
}

double max_theta(const FiniteHamiltonian& H, double tau) {
    return H.levels().cwiseAbs().maxCoeff() * tau / H.hbar();
}

void require_arcsin_domain(double theta_max) {
    if (theta_max > 1.0) {
        throw Error("chronon_qm", "SpectralRadiusExceeded",
                    "max |W| tau / hbar = " + std::to_string(theta_max) + " exceeds 1");
    }
}

// Per-mode factor applied to eigenbasis coefficients.
State scale_modes(const FiniteHamiltonian& H, const State& psi,
                  const std::function<Complex(double)>& factor) {
    const numcore::EigenSystem& es = H.eigensystem();
    State c = es.to_eigenbasis(psi);
    for (Eigen::Index n = 0; n < c.size(); ++n) c(n) *= factor(es.eigenvalues(n));
    return es.from_eigenbasis(c);
}

State stable_seed(const FiniteHamiltonian& H, double tau, const State& psi0) {
    require_arcsin_domain(max_theta(H, tau));
    const double hbar = H.hbar();
    return scale_modes(H, psi0, [&](double W) {
        return std::exp(-kI * std::asin(std::min(1.0, std::max(-1.0, tau * W / hbar))));
    });
}

}  // namespace

FiniteHamiltonian::FiniteHamiltonian(ComplexMatrix matrix, double hbar)
    : matrix_(std::move(matrix)), hbar_(hbar) {
    if (!(hbar_ > 0.0)) {
        throw Error("chronon_qm", "InvalidParams", "hbar must be positive", ErrorKind::Config);
    }
    eig_ = numcore::eig_hermitian(matrix_);
    matrix_ = 0.5 * (matrix_ + matrix_.adjoint()).eval();
}

State step(const FiniteHamiltonian& H, const ChrononParams& params, const State& prev,
           const State* prev2) {
    require_tau(params.tau);
    require_dim(prev, H.dim());
    const double theta_scale = params.tau / H.hbar();
    switch (params.scheme) {
        case Scheme::Retarded:
            return scale_modes(H, prev,
                               [&](double W) { return 1.0 / (1.0 + kI * theta_scale * W); });
        case Scheme::Advanced:
            return prev - kI * theta_scale * (H.matrix() * prev);
        case Scheme::Symmetric:
            if (prev2 == nullptr) {
                throw Error("chronon_qm", "MissingSecondSlice",
                            "symmetric step needs psi(t - tau)", ErrorKind::Config);
            }
            require_dim(*prev2, H.dim());
            return *prev2 - 2.0 * kI * theta_scale * (H.matrix() * prev);
    }
    return prev;
}

DiscreteTrajectory evolve(const FiniteHamiltonian& H, const ChrononParams& params,
                          const State& psi0, std::size_t steps, SymmetricSeed seed) {
    require_tau(params.tau);
    require_dim(psi0, H.dim());
    DiscreteTrajectory tr{params.tau, params.scheme, {}, {}};
    tr.states.reserve(steps + 1);
    tr.states.push_back(psi0);
    for (std::size_t k = 1; k <= steps; ++k) {
        if (params.scheme == Scheme::Symmetric && k == 1) {
            tr.states.push_back(seed == SymmetricSeed::Stable
                                    ? stable_seed(H, params.tau, psi0)
                                    : State(psi0 - kI * (params.tau / H.hbar()) * (H.matrix() * psi0)));
        } else if (params.scheme == Scheme::Symmetric) {
            tr.states.push_back(step(H, params, tr.states[k - 1], &tr.states[k - 2]));
        } else {
            tr.states.push_back(step(H, params, tr.states[k - 1]));
        }
    }
    tr.norms.reserve(tr.states.size());
    for (const State& s : tr.states) tr.norms.push_back(s.squaredNorm());
    return tr;
}

State retarded_closed_form(const FiniteHamiltonian& H, double tau, const State& f, long long k) {
    require_tau(tau);
    require_dim(f, H.dim());
    if (k < 0) {
        throw Error("chronon_qm", "InvalidParams", "k must be >= 0", ErrorKind::Config);
    }
    const double kk = static_cast<double>(k);
    return scale_modes(H, f, [&](double W) {
        return std::exp(-kk * log_one_plus_i(tau * W / H.hbar()));
    });
}

Eigen::VectorXd norm_rates(const FiniteHamiltonian& H, double tau) {
    require_tau(tau);
    Eigen::VectorXd g(H.dim());
    for (Eigen::Index n = 0; n < g.size(); ++n) {
        const double theta = tau * H.levels()(n) / H.hbar();
        g(n) = std::log1p(theta * theta) / tau;
    }
    return g;
}

State EquivalentHamiltonian::evolve(const State& psi0, double t) const {
    State c = eigenvectors.adjoint() * psi0;
    for (Eigen::Index n = 0; n < c.size(); ++n) c(n) *= std::exp(-kI * values(n) * t / hbar);
    return eigenvectors * c;
}

EquivalentHamiltonian equivalent_hamiltonian(const FiniteHamiltonian& H, double tau,
                                             Scheme scheme) {
    require_tau(tau);
    const double hbar = H.hbar();
    std::function<Complex(double)> f;
    switch (scheme) {
        case Scheme::Symmetric:
            require_arcsin_domain(max_theta(H, tau));
            f = [=](double W) {
                return Complex(hbar / tau * std::asin(std::min(1.0, std::max(-1.0, tau * W / hbar))),
                               0.0);
            };
            break;
        case Scheme::Retarded:
            f = [=](double W) { return -kI * (hbar / tau) * log_one_plus_i(tau * W / hbar); };
            break;
        case Scheme::Advanced:
            f = [=](double W) { return kI * (hbar / tau) * log_one_plus_i(-tau * W / hbar); };
            break;
    }
    const numcore::EigenSystem& es = H.eigensystem();
    EquivalentHamiltonian out{scheme, hbar, Eigen::VectorXcd(es.dim()), es.eigenvectors, {}};
    for (Eigen::Index n = 0; n < es.dim(); ++n) out.values(n) = f(es.eigenvalues(n));
    out.matrix = es.eigenvectors * out.values.asDiagonal() * es.eigenvectors.adjoint();
    return out;
}

State exact_evolution(const FiniteHamiltonian& H, const State& psi0, double t) {
    require_dim(psi0, H.dim());
    return scale_modes(H, psi0, [&](double W) { return std::exp(-kI * W * t / H.hbar()); });
}

Eigen::VectorXd occupations(const FiniteHamiltonian& H, const State& psi) {
    require_dim(psi, H.dim());
    return H.eigensystem().to_eigenbasis(psi).cwiseAbs2();
}

ComplexMatrix caldirola_kanai(const UniformGrid& grid, const std::vector<double>& V, double gamma,
                              double mass, double hbar, double t) {
    if (grid.n < 3) {
        throw Error("chronon_qm", "GridTooSmall", "grid needs at least 3 points",
                    ErrorKind::Config);
    }
    if (V.size() != grid.n) {
        throw Error("chronon_qm", "DimensionMismatch", "potential samples do not match grid",
                    ErrorKind::Config);
    }
    if (!(grid.dx > 0.0) || !(mass > 0.0) || !(hbar > 0.0)) {
        throw Error("chronon_qm", "InvalidParams", "dx, mass and hbar must be positive",
                    ErrorKind::Config);
    }
    const auto n = static_cast<Eigen::Index>(grid.n);
    const double kinetic = std::exp(-gamma * t) * (-hbar * hbar / (2.0 * mass)) /
                           (grid.dx * grid.dx);
    const double potential = std::exp(gamma * t);
    ComplexMatrix m = ComplexMatrix::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        m(i, i) = -2.0 * kinetic + potential * V[static_cast<std::size_t>(i)];
        if (i + 1 < n) {
            m(i, i + 1) = kinetic;
            m(i + 1, i) = kinetic;
        }
    }
    return m;
}

DiscreteTrajectory evolve_time_dependent(const std::function<ComplexMatrix(double)>& H_of_t,
                                         double hbar, const ChrononParams& params,
                                         const State& psi0, std::size_t steps,
                                         SymmetricSeed seed) {
    require_tau(params.tau);
    const double tau = params.tau;
    const double s = tau / hbar;
    DiscreteTrajectory tr{tau, params.scheme, {psi0}, {}};
    tr.states.reserve(steps + 1);
    for (std::size_t k = 1; k <= steps; ++k) {
        const double t_prev = tau * static_cast<double>(k - 1);
        const State& prev = tr.states[k - 1];
        switch (params.scheme) {
            case Scheme::Retarded: {
                const ComplexMatrix H = H_of_t(t_prev + 0.5 * tau);
                require_dim(prev, H.rows());
                const ComplexMatrix A =
                    ComplexMatrix::Identity(H.rows(), H.cols()) + kI * s * H;
                tr.states.push_back(A.partialPivLu().solve(prev));
                break;
            }
            case Scheme::Advanced: {
                const ComplexMatrix H = H_of_t(t_prev + 0.5 * tau);
                require_dim(prev, H.rows());
                tr.states.push_back(prev - kI * s * (H * prev));
                break;
            }
            case Scheme::Symmetric: {
                if (k == 1) {
                    const FiniteHamiltonian H0(H_of_t(0.5 * tau), hbar);
                    require_dim(prev, H0.dim());
                    tr.states.push_back(seed == SymmetricSeed::Stable
                                            ? stable_seed(H0, tau, prev)
                                            : State(prev - kI * s * (H0.matrix() * prev)));
                } else {
                    // Interval [t - tau, t + tau] is centred on t = t_prev.
                    const ComplexMatrix H = H_of_t(t_prev);
                    tr.states.push_back(tr.states[k - 2] - 2.0 * kI * s * (H * prev));
                }
                break;
            }
        }
    }
    for (const State& st : tr.states) tr.norms.push_back(st.squaredNorm());
    return tr;
}

}  // namespace chronon::chronon_qm
