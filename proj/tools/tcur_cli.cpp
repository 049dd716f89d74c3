// tcur: tensor CUR decomposition and adapter fine-tuning from the command line.
//
// Exit codes: 0 success, 1 invalid arguments, 2 I/O or checkpoint failure,
// 3 verification failure.

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "tcur/checkpoint.hpp"
#include "tcur/report.hpp"
#include "tcur/verify.hpp"

namespace {

using namespace tcur;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 1;
constexpr int kExitIo = 2;
constexpr int kExitVerify = 3;

int exit_code_for(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::IoFailure:
        case ErrorKind::CorruptCheckpoint:
        case ErrorKind::UnsupportedVersion:
            return kExitIo;
        default:
            return kExitInvalid;
    }
}

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path);
    if (!out) throw Error(ErrorKind::IoFailure, "cannot open " + out_path + " for writing");
    out << text;
}

Dims parse_dims(const std::vector<std::size_t>& v) {
    if (v.size() != 3) throw Error(ErrorKind::InvalidArgument, "--dims takes exactly three values n1,n2,n3");
    return Dims{v[0], v[1], v[2]};
}

Tensor3 load_tensor(const std::string& path) {
    Checkpoint ckpt = read_checkpoint(path);
    if (auto* t = std::get_if<Tensor3>(&ckpt.payload)) return std::move(*t);
    throw Error(ErrorKind::InvalidArgument, path + " holds a " + std::string(to_string(ckpt.kind())) +
                                                " payload, expected raw_tensor");
}

struct TaskFlags {
    std::vector<std::size_t> dims{16, 16, 8};
    std::string base_path;
    std::size_t rank = 4;
    int steps = 2000;
    double lr = 0.0;
    std::string optimizer = "gd";
    std::string plant_mode = "in_span";
    std::uint64_t seed = 0;
    double tol = 0.0;
    std::string format = "json";

    void add_to(CLI::App* cmd) {
        cmd->add_option("--dims", dims, "Tensor dims n1 n2 n3 for a random base")->delimiter(',')->expected(3);
        cmd->add_option("--in", base_path, "Base tensor checkpoint (overrides --dims)");
        cmd->add_option("--rank", rank, "CUR rank r");
        cmd->add_option("--steps", steps, "Optimizer steps");
        cmd->add_option("--lr", lr, "Learning rate (0: 1/L from power iteration for gd, 1e-2 for adam)");
        cmd->add_option("--optimizer", optimizer, "gd or adam")->check(CLI::IsMember({"gd", "adam"}));
        cmd->add_option("--plant-mode", plant_mode, "in_span or out_of_span")
            ->check(CLI::IsMember({"in_span", "out_of_span"}));
        cmd->add_option("--seed", seed, "Random seed");
        cmd->add_option("--tol", tol, "Stop once loss <= tol * initial loss (0 disables)");
        cmd->add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    }

    SyntheticTask task() const {
        const PlantMode mode = *parse_plant_mode(plant_mode);
        if (!base_path.empty()) return make_task(load_tensor(base_path), rank, mode, seed);
        return make_task(parse_dims(dims), rank, mode, seed);
    }
};

int cmd_generate(const std::vector<std::size_t>& dims, std::size_t tubal_rank, std::uint64_t seed,
                 const std::string& out) {
    const Dims d = parse_dims(dims);
    std::mt19937_64 rng(seed);
    Tensor3 t = tubal_rank == 0 ? random_normal(d, rng)
                                : tprod(random_normal({d.n1, tubal_rank, d.n3}, rng),
                                        random_normal({tubal_rank, d.n2, d.n3}, rng));
    write_checkpoint(out, Checkpoint{StackGroup::None, std::move(t)});
    std::cout << json{{"command", "generate"}, {"dims", dims_json(d)}, {"tubal_rank", tubal_rank}, {"seed", seed},
                      {"out", out}}
                     .dump()
              << '\n';
    return kExitOk;
}

int cmd_decompose(const std::string& in, std::size_t rank, const std::string& out) {
    const Tensor3 w = load_tensor(in);
    TcurFactors f = tcur::decompose(w, rank);
    const double err = rel_error(reconstruct(f), w);
    json summary{{"command", "decompose"}, {"dims", dims_json(w.dims())},
                 {"rank", rank},           {"rows", f.rows.indices()},
                 {"columns", f.columns.indices()}, {"rel_error", err}};
    write_checkpoint(out, Checkpoint{StackGroup::None, std::move(f)});
    std::cout << summary.dump() << '\n';
    return kExitOk;
}

int cmd_reconstruct(const std::string& in, const std::string& out, const std::string& reference, double tol) {
    Checkpoint ckpt = read_checkpoint(in);
    const auto* f = std::get_if<TcurFactors>(&ckpt.payload);
    if (!f) throw Error(ErrorKind::InvalidArgument, in + " does not hold tcur factors");
    Tensor3 w = reconstruct(*f, tol > 0.0 ? tol : kDefaultSvTolFactor);
    json summary{{"command", "reconstruct"}, {"dims", dims_json(w.dims())}, {"rank", f->rank}};
    if (!reference.empty()) summary["rel_error"] = rel_error(w, load_tensor(reference));
    if (!out.empty()) write_checkpoint(out, Checkpoint{StackGroup::None, std::move(w)});
    std::cout << summary.dump() << '\n';
    return kExitOk;
}

int cmd_verify(std::uint64_t seed, const std::string& fault, const std::string& format, const std::string& out) {
    const auto results = run_verification({seed, fault});
    bool all_passed = true;
    std::ostringstream text;
    if (format == "csv") {
        text.precision(17);
        text << "check,passed,measured,threshold\n";
        for (const CheckResult& r : results) {
            text << r.name << ',' << (r.passed ? "true" : "false") << ',' << r.measured << ',' << r.threshold << '\n';
            all_passed = all_passed && r.passed;
        }
    } else {
        json checks = json::array();
        for (const CheckResult& r : results) {
            checks.push_back({{"check", r.name},
                              {"passed", r.passed},
                              {"measured", r.measured},
                              {"threshold", r.threshold},
                              {"detail", r.detail}});
            all_passed = all_passed && r.passed;
        }
        text << json{{"command", "verify"}, {"seed", seed}, {"passed", all_passed}, {"checks", checks}}.dump(2)
             << '\n';
    }
    emit(text.str(), out);
    for (const CheckResult& r : results) {
        if (!r.passed) std::cerr << "FAIL " << r.name << ": " << r.detail << '\n';
    }
    return all_passed ? kExitOk : kExitVerify;
}

int cmd_finetune(const TaskFlags& flags, const std::string& out, const std::string& merged_out) {
    const SyntheticTask task = flags.task();
    Adapter adapter = init_adapter(task.base, flags.rank);
    TrainOptions opts;
    opts.steps = flags.steps;
    opts.optimizer = *parse_optimizer(flags.optimizer);
    opts.stop_ratio = flags.tol;
    opts.lr = flags.lr;
    if (opts.lr == 0.0) {
        const double lipschitz = estimate_lipschitz(adapter);
        opts.lr = opts.optimizer == Optimizer::Adam ? 1e-2 : (lipschitz > 0.0 ? 1.0 / lipschitz : 0.0);
    }
    const TrainHistory history = train(adapter, task, opts);
    if (!out.empty()) write_checkpoint(out, Checkpoint{StackGroup::None, adapter});
    if (!merged_out.empty()) write_checkpoint(merged_out, Checkpoint{StackGroup::None, merge(adapter)});

    if (flags.format == "csv") {
        std::cout << to_csv(history);
    } else {
        json doc{{"command", "finetune"},
                 {"seed", flags.seed},
                 {"rank", flags.rank},
                 {"dims", dims_json(task.base.dims())},
                 {"optimizer", flags.optimizer},
                 {"plant_mode", flags.plant_mode},
                 {"lr", opts.lr},
                 {"learnable_params", adapter.learnable_params()},
                 {"history", to_json(history)}};
        std::cout << doc.dump(2) << '\n';
    }
    return kExitOk;
}

int cmd_report(const TaskFlags& flags, bool no_timing, const std::string& out) {
    const SyntheticTask task = flags.task();
    BaselineOptions opts;
    opts.steps = flags.steps;
    opts.optimizer = *parse_optimizer(flags.optimizer);
    opts.lr = flags.lr;
    opts.stop_ratio = flags.tol;
    ComparisonReport report = run_baselines(task, flags.rank, opts);
    if (no_timing) {
        for (ReportRecord& r : report.records) r.wall_ms = 0.0;
    }
    emit(flags.format == "csv" ? to_csv(report) : to_json(report).dump(2) + "\n", out);
    return kExitOk;
}

int cmd_params(std::size_t d, std::size_t layers, std::size_t rank, std::size_t baseline_rank,
               const std::string& out) {
    const StackingConfig cfg{d, layers, 1};
    json doc{{"command", "params"},
             {"d", d},
             {"n_layers", layers},
             {"tcur", to_json(count_params(cfg, rank))},
             {"matrix_cur", to_json(count_matrix_params(cfg, baseline_rank))}};
    emit(doc.dump(2) + "\n", out);
    std::cerr << "note: " << kParamCountCaveat << '\n';
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Tensor CUR decomposition and low-rank adapter toolkit"};
    app.require_subcommand(1);

    std::vector<std::size_t> gen_dims{8, 8, 4};
    std::size_t gen_tubal_rank = 0;
    std::uint64_t gen_seed = 0;
    std::string gen_out;
    auto* generate = app.add_subcommand("generate", "Write a random tensor checkpoint");
    generate->add_option("--dims", gen_dims, "n1,n2,n3")->delimiter(',')->expected(3);
    generate->add_option("--tubal-rank", gen_tubal_rank, "Build as a t-product of rank-k factors (0: dense)");
    generate->add_option("--seed", gen_seed, "Random seed");
    generate->add_option("--out", gen_out, "Output checkpoint")->required();

    std::string dec_in, dec_out;
    std::size_t dec_rank = 0;
    auto* decompose_cmd = app.add_subcommand("decompose", "Tensor CUR decomposition of a checkpointed tensor");
    decompose_cmd->add_option("--in", dec_in, "Input raw-tensor checkpoint")->required();
    decompose_cmd->add_option("--rank", dec_rank, "Number of sampled rows and columns")->required();
    decompose_cmd->add_option("--out", dec_out, "Output factor checkpoint")->required();

    std::string rec_in, rec_out, rec_ref;
    double rec_tol = 0.0;
    auto* reconstruct_cmd = app.add_subcommand("reconstruct", "Rebuild C * pinv(U) * R from factors");
    reconstruct_cmd->add_option("--in", rec_in, "Factor checkpoint")->required();
    reconstruct_cmd->add_option("--out", rec_out, "Output raw-tensor checkpoint");
    reconstruct_cmd->add_option("--reference", rec_ref, "Tensor to report rel_error against");
    reconstruct_cmd->add_option("--tol", rec_tol, "Singular-value cutoff factor for the pseudoinverse");

    std::uint64_t ver_seed = VerifyOptions{}.seed;
    std::string ver_fault, ver_format = "json", ver_out;
    auto* verify = app.add_subcommand("verify", "Run the oracle and invariant suite");
    verify->add_option("--seed", ver_seed, "Random seed");
    verify->add_option("--inject-fault", ver_fault, "Perturb the named check (test hook)");
    verify->add_option("--format", ver_format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    verify->add_option("--out", ver_out, "Write the report here instead of stdout");

    TaskFlags ft_flags;
    std::string ft_out, ft_merged;
    auto* finetune = app.add_subcommand("finetune", "Train an adapter core on a synthetic task");
    ft_flags.add_to(finetune);
    finetune->add_option("--out", ft_out, "Adapter checkpoint to write");
    finetune->add_option("--merged-out", ft_merged, "Merged effective weights checkpoint to write");

    TaskFlags rep_flags;
    rep_flags.steps = 2000;
    bool rep_no_timing = false;
    std::string rep_out;
    auto* report = app.add_subcommand("report", "Compare full, matrix CUR and tensor CUR fine-tuning");
    rep_flags.add_to(report);
    report->add_flag("--no-timing", rep_no_timing, "Zero the wall-time fields for reproducible output");
    report->add_option("--out", rep_out, "Write the report here instead of stdout");

    std::size_t par_d = 768, par_layers = 12, par_rank = 8, par_baseline = 2;
    std::string par_out;
    auto* params = app.add_subcommand("params", "Learnable parameter counts for stacked transformer weights");
    params->add_option("--d", par_d, "Embedding dimension");
    params->add_option("--layers", par_layers, "Transformer layers");
    params->add_option("--rank", par_rank, "Tensor CUR rank");
    params->add_option("--baseline-rank", par_baseline, "Matrix CUR rank");
    params->add_option("--out", par_out, "Write the report here instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitInvalid;
    }

    try {
        if (*generate) return cmd_generate(gen_dims, gen_tubal_rank, gen_seed, gen_out);
        if (*decompose_cmd) return cmd_decompose(dec_in, dec_rank, dec_out);
        if (*reconstruct_cmd) return cmd_reconstruct(rec_in, rec_out, rec_ref, rec_tol);
        if (*verify) return cmd_verify(ver_seed, ver_fault, ver_format, ver_out);
        if (*finetune) return cmd_finetune(ft_flags, ft_out, ft_merged);
        if (*report) return cmd_report(rep_flags, rep_no_timing, rep_out);
        if (*params) return cmd_params(par_d, par_layers, par_rank, par_baseline, par_out);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_code_for(e.kind());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInvalid;
    }
    return kExitInvalid;
}
