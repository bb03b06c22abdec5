#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

namespace pmc {

/// value-and-gradient callable
using Objective = std::function<double(const Eigen::VectorXd&, Eigen::VectorXd&)>;

struct OptimizerConfig {
    double step_size = 1e-2;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
    int max_iterations = 500;
    double convergence_tolerance = 1e-9;  // relative decrease over a 10-iteration window
    std::vector<int> parameter_mask;      // active coordinate indices; empty = all

    void validate() const {
        if (!(step_size > 0)) throw std::invalid_argument("optimizer: step_size must be > 0");
        if (!(beta1 >= 0 && beta1 < 1) || !(beta2 >= 0 && beta2 < 1))
            throw std::invalid_argument("optimizer: betas must lie in [0,1)");
        if (!(convergence_tolerance > 0))
            throw std::invalid_argument("optimizer: tolerance must be > 0");
    }
};

/// Moment-based first-order update rule, shared by minimize() and the
/// network trainer. One instance per flat parameter vector.
class AdamUpdater {
public:
    AdamUpdater(int dim, double step, double beta1, double beta2, double eps)
        : step_(step), beta1_(beta1), beta2_(beta2), eps_(eps),
          m_(Eigen::VectorXd::Zero(dim)), v_(Eigen::VectorXd::Zero(dim)) {}

    void apply(Eigen::VectorXd& x, const Eigen::VectorXd& grad) {
        ++t_;
        m_ = beta1_ * m_ + (1.0 - beta1_) * grad;
        v_ = beta2_ * v_ + (1.0 - beta2_) * grad.cwiseProduct(grad);
        const double c1 = 1.0 - std::pow(beta1_, t_);
        const double c2 = 1.0 - std::pow(beta2_, t_);
        x -= (step_ / c1) * m_.cwiseQuotient(((v_ / c2).cwiseSqrt().array() + eps_).matrix());
    }

    void set_step(double s) { step_ = s; }

private:
    double step_, beta1_, beta2_, eps_;
    std::int64_t t_ = 0;
    Eigen::VectorXd m_, v_;
};

struct MinimizeResult {
    Eigen::VectorXd parameters;      // best visited
    std::vector<double> trace;       // best-so-far energy per iteration
    double initial_energy = 0.0;
    double final_energy = 0.0;
    int iterations = 0;
    bool converged = false;          // tolerance window triggered
    bool aborted_non_finite = false; // objective or gradient went non-finite
};

inline MinimizeResult minimize(const Objective& objective, const Eigen::VectorXd& init,
                               const OptimizerConfig& config) {
    config.validate();
    const int dim = int(init.size());
    Eigen::VectorXd x = init, grad(dim);

    MinimizeResult res;
    double f = objective(x, grad);
    if (!std::isfinite(f)) throw std::invalid_argument("minimize: objective not finite at init");
    res.initial_energy = f;
    res.parameters = x;
    double best = f;

    if (grad.isZero(0.0)) {  // stationary start
        res.final_energy = f;
        res.trace.push_back(f);
        res.converged = true;
        return res;
    }

    std::vector<char> active(dim, 1);
    if (!config.parameter_mask.empty()) {
        active.assign(dim, 0);
        for (int i : config.parameter_mask) active[i] = 1;
    }

    AdamUpdater adam(dim, config.step_size, config.beta1, config.beta2, config.epsilon);
    for (int it = 0; it < config.max_iterations; ++it) {
        if (!std::isfinite(f) || !grad.allFinite()) {
            res.aborted_non_finite = true;
            break;
        }
        if (f < best) {
            best = f;
            res.parameters = x;
        }
        res.trace.push_back(best);
        res.iterations = it + 1;

        const int w = 10;
        if (it >= w) {
            const double before = res.trace[it - w];
            if (before - best <= config.convergence_tolerance *
                                     std::max(std::abs(before), 1e-12)) {
                res.converged = true;
                break;
            }
        }

        for (int i = 0; i < dim; ++i)
            if (!active[i]) grad[i] = 0.0;
        adam.apply(x, grad);
        f = objective(x, grad);
    }
    if (std::isfinite(f) && f < best) {
        best = f;
        res.parameters = x;
    }
    res.final_energy = best;
    return res;
}

/// Max relative deviation between the analytic gradient and central finite
/// differences, normalized by the gradient scale with a 1e-12 floor.
inline double check_gradient(const Objective& objective, const Eigen::VectorXd& point,
                             double step = 1e-5) {
    const int dim = int(point.size());
    Eigen::VectorXd g(dim), dummy(dim);
    objective(point, g);
    Eigen::VectorXd fd(dim);
    Eigen::VectorXd x = point;
    for (int i = 0; i < dim; ++i) {
        const double xi = x[i];
        x[i] = xi + step;
        const double fp = objective(x, dummy);
        x[i] = xi - step;
        const double fm = objective(x, dummy);
        x[i] = xi;
        fd[i] = (fp - fm) / (2.0 * step);
    }
    const double scale = std::max(1e-12, g.cwiseAbs().maxCoeff() + fd.cwiseAbs().maxCoeff());
    return (g - fd).cwiseAbs().maxCoeff() / scale;
}

}  // namespace pmc
