#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "tcur/cur.hpp"

namespace tcur {

/// Which stacked weight group a tensor represents. Part of the checkpoint format.
enum class StackGroup : std::uint32_t {
    None = 0,
    SelfAttention = 1,  // d x d x 4L, layer-major, roles q, k, v, o
    MlpUp = 2,          // d x 4d x L, layer order
    MlpDown = 3,        // 4d x d x L, layer order
};

std::string_view to_string(StackGroup g);

enum class AttentionRole : std::size_t { Query = 0, Key = 1, Value = 2, Output = 3 };

inline constexpr std::size_t kAttentionRoles = 4;

struct StackingConfig {
    std::size_t d = 0;
    std::size_t n_layers = 0;
    // Documentation only; shapes use the merged d x d projections.
    std::size_t n_heads = 1;

    std::size_t head_dim() const { return n_heads ? d / n_heads : 0; }
    Dims self_attention_dims() const { return {d, d, kAttentionRoles * n_layers}; }
    Dims mlp_up_dims() const { return {d, 4 * d, n_layers}; }
    Dims mlp_down_dims() const { return {4 * d, d, n_layers}; }
    Dims dims_of(StackGroup g) const;
    void validate() const;
};

/// Transformer-layer weights that get adapted: attention projections and MLP.
struct LayerWeights {
    std::array<Matrix, kAttentionRoles> attention;  // q, k, v, o; each d x d
    Matrix up;                                      // d x 4d
    Matrix down;                                    // 4d x d
};

struct StackedWeights {
    Tensor3 self_attention;
    Tensor3 mlp_up;
    Tensor3 mlp_down;
};

/// Concatenates per-layer matrices along the frontal dimension.
StackedWeights stack_layers(const std::vector<LayerWeights>& layers, const StackingConfig& cfg);

std::vector<LayerWeights> unstack_layers(const StackedWeights& stacked, const StackingConfig& cfg);

/// Maps W_sa slice index to (layer, role).
std::pair<std::size_t, AttentionRole> attention_slice_role(std::size_t slice);

/// Frozen base plus frozen C, R and a learnable core U:
///   W = base + C * U * R
class Adapter {
public:
    /// Rebuilds an adapter from stored tensors (e.g. a checkpoint). Validates shapes.
    static Adapter restore(Tensor3 base, Tensor3 C, Tensor3 R, Tensor3 U);

    const Tensor3& base() const { return base_; }
    const Tensor3& C() const { return C_; }
    const Tensor3& R() const { return R_; }
    const Tensor3& core() const { return U_; }
    std::size_t rank() const { return C_.n2(); }

    /// Replaces the learnable core; shape must stay r x r x n3.
    void set_core(Tensor3 u);

    std::size_t learnable_params() const { return U_.size(); }

private:
    friend Adapter init_adapter(const Tensor3& base, std::size_t r);
    Adapter(Tensor3 base, Tensor3 C, Tensor3 R, Tensor3 U);

    Tensor3 base_;
    Tensor3 C_;
    Tensor3 R_;
    Tensor3 U_;
};

/// Runs tcur on `base`, keeps C and R, drops the sampled core and starts U at zero.
Adapter init_adapter(const Tensor3& base, std::size_t r);

/// C * U * R for an arbitrary core (same shape as the adapter's core).
Tensor3 delta_for_core(const Adapter& a, const Tensor3& core);

Tensor3 delta(const Adapter& a);
Tensor3 effective_weights(const Adapter& a);

/// Effective weights, the tensor written out when exporting a fine-tuned model.
Tensor3 merge(const Adapter& a);

struct GroupParams {
    StackGroup group = StackGroup::None;
    Dims weight_dims;
    Dims core_dims;
    std::size_t learnable = 0;
};

struct ParamReport {
    std::size_t rank = 0;
    std::vector<GroupParams> groups;
    std::size_t total_learnable = 0;
    std::size_t total_frozen_weights = 0;
};

struct MatrixParamReport {
    std::size_t rank = 0;
    std::size_t matrices = 0;
    std::size_t per_matrix = 0;
    std::size_t total_learnable = 0;
};

/// Learnable cores per stacked group: r*r per frontal slice.
ParamReport count_params(const StackingConfig& cfg, std::size_t r);

/// Per-matrix CUR baseline: one r x r core per adapted matrix.
MatrixParamReport count_matrix_params(const StackingConfig& cfg, std::size_t r);

/// Learnable entries of a tensor-CUR core over a tensor with n3 slices.
inline std::size_t tcur_core_params(std::size_t n3, std::size_t r) { return r * r * n3; }

/// Reported end-to-end totals include the fully-trained segmentation decoder,
/// which these counts do not model.
inline constexpr const char* kParamCountCaveat =
    "counts cover the adapted transformer weights only; a reported 2.683 M trainable total "
    "also includes the fully-updated UNETR decoder, which is not modeled here";

}  // namespace tcur
