#include "tcur/report.hpp"

#include <sstream>

namespace tcur {

nlohmann::json dims_json(const Dims& d) { return nlohmann::json::array({d.n1, d.n2, d.n3}); }

nlohmann::json to_json(const ReportRecord& r) {
    return {{"method", r.method},   {"params", r.params}, {"final_loss", r.final_loss},
            {"wall_ms", r.wall_ms}, {"rank", r.rank},     {"dims", dims_json(r.dims)}};
}

nlohmann::json to_json(const ComparisonReport& r) {
    nlohmann::json records = nlohmann::json::array();
    for (const ReportRecord& rec : r.records) records.push_back(to_json(rec));
    return {{"seed", r.seed}, {"plant_mode", std::string(to_string(r.plant_mode))}, {"records", records}};
}

nlohmann::json to_json(const TrainHistory& h) {
    nlohmann::json steps = nlohmann::json::array();
    for (const TrainStep& s : h.steps) {
        steps.push_back({{"loss", s.loss}, {"grad_norm", s.grad_norm}, {"step_size", s.step_size}});
    }
    return {{"initial_loss", h.initial_loss}, {"final_loss", h.final_loss}, {"steps", steps}};
}

nlohmann::json to_json(const ParamReport& p) {
    nlohmann::json groups = nlohmann::json::array();
    for (const GroupParams& g : p.groups) {
        groups.push_back({{"group", std::string(to_string(g.group))},
                          {"weight_dims", dims_json(g.weight_dims)},
                          {"core_dims", dims_json(g.core_dims)},
                          {"learnable", g.learnable}});
    }
    return {{"rank", p.rank},
            {"groups", groups},
            {"total_learnable", p.total_learnable},
            {"total_frozen_weights", p.total_frozen_weights},
            {"caveat", kParamCountCaveat}};
}

nlohmann::json to_json(const MatrixParamReport& p) {
    return {{"rank", p.rank},
            {"matrices", p.matrices},
            {"per_matrix", p.per_matrix},
            {"total_learnable", p.total_learnable}};
}

std::string to_csv(const ComparisonReport& r) {
    std::ostringstream out;
    out.precision(17);
    out << "method,params,final_loss,wall_ms,rank,n1,n2,n3,seed\n";
    for (const ReportRecord& rec : r.records) {
        out << rec.method << ',' << rec.params << ',' << rec.final_loss << ',' << rec.wall_ms << ',' << rec.rank
            << ',' << rec.dims.n1 << ',' << rec.dims.n2 << ',' << rec.dims.n3 << ',' << r.seed << '\n';
    }
    return out.str();
}

std::string to_csv(const TrainHistory& h) {
    std::ostringstream out;
    out.precision(17);
    out << "step,loss,grad_norm,step_size\n";
    for (std::size_t n = 0; n < h.steps.size(); ++n) {
        out << n << ',' << h.steps[n].loss << ',' << h.steps[n].grad_norm << ',' << h.steps[n].step_size << '\n';
    }
    return out.str();
}

}  // namespace tcur
