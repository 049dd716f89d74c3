#include "tcur/adapter.hpp"

namespace tcur {

std::string_view to_string(StackGroup g) {
    switch (g) {
        case StackGroup::None: return "none";
        case StackGroup::SelfAttention: return "sa";
        case StackGroup::MlpUp: return "up";
        case StackGroup::MlpDown: return "down";
    }
    return "unknown";
}

Dims StackingConfig::dims_of(StackGroup g) const {
    switch (g) {
        case StackGroup::SelfAttention: return self_attention_dims();
        case StackGroup::MlpUp: return mlp_up_dims();
        case StackGroup::MlpDown: return mlp_down_dims();
        case StackGroup::None: break;
    }
    throw Error(ErrorKind::DimMismatch, "no stacked shape for group none");
}

void StackingConfig::validate() const {
    if (d < 1 || n_layers < 1) {
        throw Error(ErrorKind::DimMismatch, "stacking config needs d >= 1 and n_layers >= 1");
    }
}

namespace {

void require_shape(const Matrix& m, std::size_t rows, std::size_t cols, const std::string& what) {
    if (std::size_t(m.rows()) != rows || std::size_t(m.cols()) != cols) {
        throw Error(ErrorKind::DimMismatch, what + " is " + std::to_string(m.rows()) + "x" +
                                                std::to_string(m.cols()) + ", expected " + std::to_string(rows) +
                                                "x" + std::to_string(cols));
    }
}

void require_dims(const Tensor3& t, const Dims& want, const std::string& what) {
    if (t.dims() != want) {
        throw Error(ErrorKind::DimMismatch, what + " has dims " + t.dims().str() + ", expected " + want.str());
    }
}

}  // namespace

StackedWeights stack_layers(const std::vector<LayerWeights>& layers, const StackingConfig& cfg) {
    cfg.validate();
    if (layers.size() != cfg.n_layers) {
        throw Error(ErrorKind::DimMismatch, "expected " + std::to_string(cfg.n_layers) + " layers, got " +
                                                std::to_string(layers.size()));
    }
    const std::size_t d = cfg.d;
    StackedWeights out{Tensor3(cfg.self_attention_dims()), Tensor3(cfg.mlp_up_dims()), Tensor3(cfg.mlp_down_dims())};
    for (std::size_t l = 0; l < layers.size(); ++l) {
        const LayerWeights& layer = layers[l];
        const std::string prefix = "layer " + std::to_string(l) + " ";
        for (std::size_t role = 0; role < kAttentionRoles; ++role) {
            require_shape(layer.attention[role], d, d, prefix + "attention[" + std::to_string(role) + "]");
            out.self_attention.slice(l * kAttentionRoles + role) = layer.attention[role];
        }
        require_shape(layer.up, d, 4 * d, prefix + "up");
        require_shape(layer.down, 4 * d, d, prefix + "down");
        out.mlp_up.slice(l) = layer.up;
        out.mlp_down.slice(l) = layer.down;
    }
    return out;
}

std::vector<LayerWeights> unstack_layers(const StackedWeights& stacked, const StackingConfig& cfg) {
    cfg.validate();
    require_dims(stacked.self_attention, cfg.self_attention_dims(), "W_sa");
    require_dims(stacked.mlp_up, cfg.mlp_up_dims(), "W_up");
    require_dims(stacked.mlp_down, cfg.mlp_down_dims(), "W_down");
    std::vector<LayerWeights> layers(cfg.n_layers);
    for (std::size_t l = 0; l < cfg.n_layers; ++l) {
        for (std::size_t role = 0; role < kAttentionRoles; ++role) {
            layers[l].attention[role] = stacked.self_attention.slice(l * kAttentionRoles + role);
        }
        layers[l].up = stacked.mlp_up.slice(l);
        layers[l].down = stacked.mlp_down.slice(l);
    }
    return layers;
}

std::pair<std::size_t, AttentionRole> attention_slice_role(std::size_t slice) {
    return {slice / kAttentionRoles, AttentionRole(slice % kAttentionRoles)};
}

Adapter::Adapter(Tensor3 base, Tensor3 C, Tensor3 R, Tensor3 U)
    : base_(std::move(base)), C_(std::move(C)), R_(std::move(R)), U_(std::move(U)) {}

Adapter Adapter::restore(Tensor3 base, Tensor3 C, Tensor3 R, Tensor3 U) {
    const Dims b = base.dims();
    const std::size_t r = C.n2();
    require_dims(C, {b.n1, r, b.n3}, "C");
    require_dims(R, {r, b.n2, b.n3}, "R");
    require_dims(U, {r, r, b.n3}, "U");
    return Adapter(std::move(base), std::move(C), std::move(R), std::move(U));
}

void Adapter::set_core(Tensor3 u) {
    require_dims(u, U_.dims(), "core");
    U_ = std::move(u);
}

Adapter init_adapter(const Tensor3& base, std::size_t r) {
    TcurFactors f = decompose(base, r);
    Tensor3 U(r, r, base.n3());
    return Adapter(base, std::move(f.C), std::move(f.R), std::move(U));
}

Tensor3 delta_for_core(const Adapter& a, const Tensor3& core) {
    require_dims(core, a.core().dims(), "core");
    return tprod(a.C(), tprod(core, a.R()));
}

Tensor3 delta(const Adapter& a) { return delta_for_core(a, a.core()); }

Tensor3 effective_weights(const Adapter& a) { return a.base() + delta(a); }

Tensor3 merge(const Adapter& a) { return effective_weights(a); }

ParamReport count_params(const StackingConfig& cfg, std::size_t r) {
    cfg.validate();
    if (r < 1 || r > cfg.d) {
        throw Error(ErrorKind::RankOutOfRange, "rank " + std::to_string(r) + " not in [1, d]");
    }
    ParamReport report;
    report.rank = r;
    for (StackGroup g : {StackGroup::SelfAttention, StackGroup::MlpUp, StackGroup::MlpDown}) {
        const Dims w = cfg.dims_of(g);
        GroupParams p{g, w, Dims{r, r, w.n3}, tcur_core_params(w.n3, r)};
        report.total_learnable += p.learnable;
        report.total_frozen_weights += w.numel();
        report.groups.push_back(p);
    }
    return report;
}

MatrixParamReport count_matrix_params(const StackingConfig& cfg, std::size_t r) {
    cfg.validate();
    if (r < 1 || r > cfg.d) {
        throw Error(ErrorKind::RankOutOfRange, "rank " + std::to_string(r) + " not in [1, d]");
    }
    MatrixParamReport report;
    report.rank = r;
    report.matrices = (kAttentionRoles + 2) * cfg.n_layers;
    report.per_matrix = r * r;
    report.total_learnable = report.matrices * report.per_matrix;
    return report;
}

}  // namespace tcur
