#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tcur/adapter.hpp"

namespace tcur {

enum class PlantMode { InSpan, OutOfSpan };
enum class Optimizer { GradientDescent, Adam };

std::string_view to_string(PlantMode m);
std::string_view to_string(Optimizer o);
std::optional<PlantMode> parse_plant_mode(std::string_view s);
std::optional<Optimizer> parse_optimizer(std::string_view s);

/// Synthetic fine-tuning problem: move `base` to `target` under a quadratic loss.
struct SyntheticTask {
    Tensor3 base;
    Tensor3 target;
    PlantMode plant_mode = PlantMode::InSpan;
    std::uint64_t seed = 0;
    /// Rank used to build the in-span perturbation (0 for out-of-span).
    std::size_t plant_rank = 0;
};

/// In-span: target = base + C * G * R with (C, R) = decompose(base, rank) and
/// random G, so an adapter of that rank can reach zero loss.
/// Out-of-span: target = base + dense Gaussian noise.
SyntheticTask make_task(Dims dims, std::size_t rank, PlantMode mode, std::uint64_t seed);

/// Same construction around a given base tensor.
SyntheticTask make_task(Tensor3 base, std::size_t rank, PlantMode mode, std::uint64_t seed);

/// 0.5 * ||w - t||_F^2
double loss_tensor_target(const Tensor3& w, const Tensor3& t);

double adapter_loss(const Adapter& a, const SyntheticTask& task);

/// dL/dU for dL/dW = g: C^T * g * R^T.
Tensor3 grad_core(const Adapter& a, const Tensor3& g);

/// Central differences over every core entry with step eps * (1 + |u|).
/// Costs 2 * r^2 * n3 loss evaluations.
Tensor3 finite_diff_grad(const Adapter& a, const SyntheticTask& task, double eps = 1e-5);

/// Largest eigenvalue of V -> grad_core(a, C * V * R), by power iteration.
double estimate_lipschitz(const Adapter& a, int iterations = 20, double rel_tol = 1e-6, std::uint64_t seed = 0);

struct AdamParams {
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
};

struct TrainOptions {
    int steps = 1000;
    double lr = 0.0;
    Optimizer optimizer = Optimizer::GradientDescent;
    AdamParams adam;
    /// Stop once loss <= stop_ratio * initial loss (0 disables).
    double stop_ratio = 0.0;
};

struct TrainStep {
    double loss = 0.0;       // before the update
    double grad_norm = 0.0;  // Frobenius norm of the gradient
    double step_size = 0.0;
};

struct TrainHistory {
    std::vector<TrainStep> steps;
    double initial_loss = 0.0;
    double final_loss = 0.0;
};

/// Flat-parameter optimizer shared by the tensor and matrix adapters.
class OptimizerState {
public:
    OptimizerState(Optimizer kind, double lr, AdamParams adam, std::size_t size);
    /// Applies one update in place.
    void update(std::span<double> params, std::span<const double> grad);

private:
    Optimizer kind_;
    double lr_;
    AdamParams adam_;
    std::vector<double> m_, v_;
    long t_ = 0;
};

/// Fits the adapter core to task.target. Only the core changes.
TrainHistory train(Adapter& a, const SyntheticTask& task, const TrainOptions& opts);

struct ReportRecord {
    std::string method;  // full | matrix_cur | tcur
    std::size_t params = 0;
    double final_loss = 0.0;
    double wall_ms = 0.0;
    std::size_t rank = 0;
    Dims dims;
};

struct ComparisonReport {
    std::uint64_t seed = 0;
    PlantMode plant_mode = PlantMode::InSpan;
    std::vector<ReportRecord> records;
};

struct BaselineOptions {
    int steps = 2000;
    Optimizer optimizer = Optimizer::GradientDescent;
    /// 0 selects 1/L per method, with L from power iteration (gd) or 1e-2 (adam).
    double lr = 0.0;
    double stop_ratio = 0.0;
};

/// Fits the task with a free full update, per-slice matrix CUR adapters and a tensor CUR adapter.
ComparisonReport run_baselines(const SyntheticTask& task, std::size_t r, const BaselineOptions& opts = {});

}  // namespace tcur
