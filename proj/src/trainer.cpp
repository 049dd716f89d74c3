#include "tcur/trainer.hpp"

#include <chrono>
#include <cmath>
#include <random>

namespace tcur {

std::string_view to_string(PlantMode m) { return m == PlantMode::InSpan ? "in_span" : "out_of_span"; }

std::string_view to_string(Optimizer o) { return o == Optimizer::GradientDescent ? "gd" : "adam"; }

std::optional<PlantMode> parse_plant_mode(std::string_view s) {
    if (s == "in_span") return PlantMode::InSpan;
    if (s == "out_of_span") return PlantMode::OutOfSpan;
    return std::nullopt;
}

std::optional<Optimizer> parse_optimizer(std::string_view s) {
    if (s == "gd") return Optimizer::GradientDescent;
    if (s == "adam") return Optimizer::Adam;
    return std::nullopt;
}

namespace {

SyntheticTask build_task(Tensor3 base, std::size_t rank, PlantMode mode, std::uint64_t stream, std::uint64_t seed) {
    std::mt19937_64 rng(stream);
    SyntheticTask task;
    task.base = std::move(base);
    task.plant_mode = mode;
    task.seed = seed;
    if (mode == PlantMode::InSpan) {
        const TcurFactors f = decompose(task.base, rank);
        const Tensor3 g = random_normal({rank, rank, task.base.n3()}, rng);
        task.target = task.base + tprod(f.C, tprod(g, f.R));
        task.plant_rank = rank;
    } else {
        task.target = task.base + random_normal(task.base.dims(), rng);
    }
    return task;
}

}  // namespace

SyntheticTask make_task(Dims dims, std::size_t rank, PlantMode mode, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    Tensor3 base = random_normal(dims, rng);
    return build_task(std::move(base), rank, mode, rng(), seed);
}

SyntheticTask make_task(Tensor3 base, std::size_t rank, PlantMode mode, std::uint64_t seed) {
    return build_task(std::move(base), rank, mode, seed, seed);
}

double loss_tensor_target(const Tensor3& w, const Tensor3& t) {
    if (w.dims() != t.dims()) {
        throw Error(ErrorKind::DimMismatch, "loss: " + w.dims().str() + " vs " + t.dims().str());
    }
    const double n = fro_norm(w - t);
    return 0.5 * n * n;
}

double adapter_loss(const Adapter& a, const SyntheticTask& task) {
    return loss_tensor_target(effective_weights(a), task.target);
}

Tensor3 grad_core(const Adapter& a, const Tensor3& g) {
    if (g.dims() != a.base().dims()) {
        throw Error(ErrorKind::DimMismatch, "weight gradient " + g.dims().str() + " vs base " + a.base().dims().str());
    }
    return tprod(ttranspose(a.C()), tprod(g, ttranspose(a.R())));
}

Tensor3 finite_diff_grad(const Adapter& a, const SyntheticTask& task, double eps) {
    Adapter probe = a;
    const Tensor3 center = a.core();
    Tensor3 grad(center.dims());
    Tensor3 shifted = center;
    for (std::size_t n = 0; n < center.size(); ++n) {
        const double h = eps * (1.0 + std::abs(center.data()[n]));
        shifted.data()[n] = center.data()[n] + h;
        probe.set_core(shifted);
        const double plus = adapter_loss(probe, task);
        shifted.data()[n] = center.data()[n] - h;
        probe.set_core(shifted);
        const double minus = adapter_loss(probe, task);
        shifted.data()[n] = center.data()[n];
        grad.data()[n] = (plus - minus) / (2.0 * h);
    }
    return grad;
}

double estimate_lipschitz(const Adapter& a, int iterations, double rel_tol, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    Tensor3 v = random_normal(a.core().dims(), rng);
    v *= 1.0 / fro_norm(v);
    double lambda = 0.0;
    for (int it = 0; it < iterations; ++it) {
        Tensor3 w = grad_core(a, delta_for_core(a, v));
        const double next = fro_norm(w);
        if (next == 0.0) return 0.0;
        w *= 1.0 / next;
        v = std::move(w);
        const bool converged = std::abs(next - lambda) <= rel_tol * next;
        lambda = next;
        if (converged) break;
    }
    return lambda;
}

OptimizerState::OptimizerState(Optimizer kind, double lr, AdamParams adam, std::size_t size)
    : kind_(kind), lr_(lr), adam_(adam) {
    if (kind_ == Optimizer::Adam) {
        m_.assign(size, 0.0);
        v_.assign(size, 0.0);
    }
}

void OptimizerState::update(std::span<double> params, std::span<const double> grad) {
    if (kind_ == Optimizer::GradientDescent) {
        for (std::size_t n = 0; n < params.size(); ++n) params[n] -= lr_ * grad[n];
        return;
    }
    ++t_;
    const double c1 = 1.0 - std::pow(adam_.beta1, double(t_));
    const double c2 = 1.0 - std::pow(adam_.beta2, double(t_));
    for (std::size_t n = 0; n < params.size(); ++n) {
        m_[n] = adam_.beta1 * m_[n] + (1.0 - adam_.beta1) * grad[n];
        v_[n] = adam_.beta2 * v_[n] + (1.0 - adam_.beta2) * grad[n] * grad[n];
        params[n] -= lr_ * (m_[n] / c1) / (std::sqrt(v_[n] / c2) + adam_.epsilon);
    }
}

namespace {

constexpr double kDivergenceFactor = 1e6;

void check_divergence(double loss, double initial) {
    if (!std::isfinite(loss) || (loss > kDivergenceFactor * initial && loss > 0.0)) {
        throw Error(ErrorKind::DivergenceDetected,
                    "loss " + std::to_string(loss) + " exceeds 1e6 x initial loss " + std::to_string(initial));
    }
}

void validate(const TrainOptions& opts) {
    if (opts.steps < 1) throw Error(ErrorKind::InvalidArgument, "steps must be >= 1");
    if (!(opts.lr >= 0.0) || !std::isfinite(opts.lr)) {
        throw Error(ErrorKind::InvalidArgument, "learning rate must be finite and non-negative");
    }
}

}  // namespace

TrainHistory train(Adapter& a, const SyntheticTask& task, const TrainOptions& opts) {
    validate(opts);
    TrainHistory history;
    OptimizerState optimizer(opts.optimizer, opts.lr, opts.adam, a.core().size());
    Tensor3 residual = effective_weights(a) - task.target;
    double loss = 0.5 * fro_norm(residual) * fro_norm(residual);
    history.initial_loss = loss;
    for (int step = 0; step < opts.steps; ++step) {
        if (opts.stop_ratio > 0.0 && loss <= opts.stop_ratio * history.initial_loss) break;
        const Tensor3 grad = grad_core(a, residual);
        history.steps.push_back({loss, fro_norm(grad), opts.lr});
        Tensor3 core = a.core();
        optimizer.update(core.data(), grad.data());
        a.set_core(std::move(core));
        residual = effective_weights(a) - task.target;
        const double norm = fro_norm(residual);
        loss = 0.5 * norm * norm;
        check_divergence(loss, history.initial_loss);
    }
    history.final_loss = loss;
    return history;
}

namespace {

double elapsed_ms(std::chrono::steady_clock::time_point since) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - since).count();
}

struct SliceCur {
    MatrixCur cur;
    Matrix target_delta;
    Matrix core;
};

double matrix_baseline_loss(const std::vector<SliceCur>& slices) {
    double loss = 0.0;
    for (const SliceCur& s : slices) loss += 0.5 * (s.cur.C * s.core * s.cur.R - s.target_delta).squaredNorm();
    return loss;
}

// Per-slice CUR adapters W_k + C_k U_k R_k trained on the same quadratic loss.
double fit_matrix_baseline(const SyntheticTask& task, std::size_t r, const BaselineOptions& opts) {
    std::vector<SliceCur> slices;
    double lipschitz = 0.0;
    for (std::size_t k = 0; k < task.base.n3(); ++k) {
        SliceCur s{matrix_cur(slice_matrix(task.base, k), r), slice_matrix(task.target, k) - slice_matrix(task.base, k),
                   Matrix()};
        s.core = s.cur.U0;
        const double c = s.cur.C.jacobiSvd().singularValues()(0);
        const double rr = s.cur.R.jacobiSvd().singularValues()(0);
        lipschitz = std::max(lipschitz, c * c * rr * rr);
        slices.push_back(std::move(s));
    }
    double lr = opts.lr;
    if (lr == 0.0) lr = opts.optimizer == Optimizer::Adam ? 1e-2 : (lipschitz > 0.0 ? 1.0 / lipschitz : 0.0);

    const std::size_t per = r * r;
    std::vector<double> params(per * slices.size(), 0.0), grad(params.size());
    OptimizerState optimizer(opts.optimizer, lr, AdamParams{}, params.size());
    const double initial = matrix_baseline_loss(slices);
    double loss = initial;
    for (int step = 0; step < opts.steps; ++step) {
        if (opts.stop_ratio > 0.0 && loss <= opts.stop_ratio * initial) break;
        for (std::size_t k = 0; k < slices.size(); ++k) {
            const SliceCur& s = slices[k];
            const Matrix g = s.cur.C.transpose() * (s.cur.C * s.core * s.cur.R - s.target_delta) * s.cur.R.transpose();
            // column-major flattening of the r x r core
            Eigen::Map<Matrix>(grad.data() + k * per, Eigen::Index(r), Eigen::Index(r)) = g;
        }
        optimizer.update(params, grad);
        for (std::size_t k = 0; k < slices.size(); ++k) {
            slices[k].core = Eigen::Map<const Matrix>(params.data() + k * per, Eigen::Index(r), Eigen::Index(r));
        }
        loss = matrix_baseline_loss(slices);
        check_divergence(loss, initial);
    }
    return loss;
}

}  // namespace

ComparisonReport run_baselines(const SyntheticTask& task, std::size_t r, const BaselineOptions& opts) {
    ComparisonReport report;
    report.seed = task.seed;
    report.plant_mode = task.plant_mode;
    const Dims dims = task.base.dims();

    {
        const auto start = std::chrono::steady_clock::now();
        // Unconstrained delta: the fitted weights are the target itself.
        const Tensor3 fitted = task.target;
        const double loss = loss_tensor_target(fitted, task.target);
        report.records.push_back({"full", dims.numel(), loss, elapsed_ms(start), 0, dims});
    }
    {
        const auto start = std::chrono::steady_clock::now();
        const double loss = fit_matrix_baseline(task, r, opts);
        report.records.push_back({"matrix_cur", dims.n3 * r * r, loss, elapsed_ms(start), r, dims});
    }
    {
        const auto start = std::chrono::steady_clock::now();
        Adapter adapter = init_adapter(task.base, r);
        TrainOptions topts;
        topts.steps = opts.steps;
        topts.optimizer = opts.optimizer;
        topts.stop_ratio = opts.stop_ratio;
        topts.lr = opts.lr;
        if (topts.lr == 0.0) {
            const double lipschitz = estimate_lipschitz(adapter);
            topts.lr = opts.optimizer == Optimizer::Adam ? 1e-2 : (lipschitz > 0.0 ? 1.0 / lipschitz : 0.0);
        }
        const TrainHistory h = train(adapter, task, topts);
        report.records.push_back(
            {"tcur", tcur_core_params(dims.n3, r), h.final_loss, elapsed_ms(start), r, dims});
    }
    return report;
}

}  // namespace tcur
