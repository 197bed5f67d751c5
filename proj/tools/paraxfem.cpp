// Batch front door: parse a run configuration, dispatch to the experiment
// harness, and write CSV reports plus a run manifest.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "paraxfem/config.hpp"
#include "paraxfem/csv_report.hpp"
#include "paraxfem/harness.hpp"

namespace fs = std::filesystem;
using namespace paraxfem;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

const char* model_name(ModelKind m) {
    switch (m) {
        case ModelKind::N: return "N";
        case ModelKind::AK: return "AK";
        case ModelKind::IFDP: return "IFDP";
        case ModelKind::ParabolicDissipative: return "parabolic-dissipative";
        case ModelKind::ParabolicReactive: return "parabolic-reactive";
    }
    return "?";
}

struct RunOutcome {
    std::vector<std::string> outputs;
    std::vector<std::string> notes;
};

RunOutcome run_converge(const RunConfig& cfg, const fs::path& out_dir) {
    const BoundaryMode mode = cfg.model == ModelKind::AK ? BoundaryMode::AbrahamssonKreiss
                                                         : BoundaryMode::NeumannDynamical;
    auto report = convergence_study(cfg.case_id, mode, cfg.levels);
    const fs::path path = out_dir / "converge.csv";
    write_csv(to_csv(report), path.string());
    RunOutcome rc;
    rc.outputs.push_back(path.string());
    for (const auto& lvl : report.levels)
        if (lvl.failed) rc.notes.push_back("level h=" + csv_number(lvl.h) + " failed: " + lvl.message);
    return rc;
}

RunOutcome run_wedge(const RunConfig& cfg, const fs::path& out_dir) {
    WedgeRunConfig wc;
    wc.upsloping = cfg.upsloping;
    wc.model = cfg.model == ModelKind::N ? WedgeModel::NeumannDynamical
               : cfg.model == ModelKind::AK ? WedgeModel::AbrahamssonKreiss
                                            : WedgeModel::IfdP;
    wc.mesh_elements = static_cast<std::size_t>(std::lround(1.0 / cfg.h));
    wc.steps = cfg.steps;
    wc.depth_m = cfg.depth_m;
    auto series = asa_wedge_run(wc);
    const fs::path path = out_dir / "wedge.csv";
    write_csv(to_csv(series), path.string());
    RunOutcome rc;
    rc.outputs.push_back(path.string());
    if (series.flagged_unstable)
        rc.notes.push_back("run flagged unstable after " + std::to_string(series.steps_completed) +
                           " steps");
    for (const auto& w : series.warnings) rc.notes.push_back(w);
    return rc;
}

RunOutcome run_growth(const RunConfig& cfg, const fs::path& out_dir) {
    auto report = growth_study(cfg.profile_id, cfg.level);
    const fs::path path = out_dir / "growth.csv";
    write_csv(to_csv(report), path.string());
    RunOutcome rc;
    rc.outputs.push_back(path.string());
    if (report.onset_time)
        rc.notes.push_back("growth onset at t=" + csv_number(*report.onset_time));
    return rc;
}

RunOutcome run_solve(const RunConfig& cfg, const fs::path& out_dir) {
    const std::size_t n = static_cast<std::size_t>(std::lround(1.0 / cfg.h));
    RunOutcome rc;
    CsvTable table;
    if (cfg.model == ModelKind::ParabolicDissipative) {
        auto mp = make_parabolic_dissipative();
        FeSpace space(Mesh1D::uniform(n), FeFamily::LagrangeLinear);
        DissipativeCnContext ctx(space, mp.coeffs, TimeGrid::uniform(cfg.T, cfg.steps));
        auto hist = ctx.run(ctx.init(mp.u0, mp.u0_prime));
        table = monitors_csv(hist.times, hist.l2_norms, model_name(cfg.model));
    } else if (cfg.model == ModelKind::ParabolicReactive) {
        auto mp = make_parabolic_reactive();
        FeSpace space(Mesh1D::uniform(n), FeFamily::HermiteCubic);
        ReactiveCnContext ctx(space, mp.coeffs, TimeGrid::uniform(cfg.T, cfg.steps));
        auto hist = ctx.run(ctx.init(mp.u0, mp.u0_prime, mp.u0_second));
        table = monitors_csv(hist.times, hist.l2_norms, model_name(cfg.model));
    } else if (cfg.model == ModelKind::IFDP) {
        const BottomProfile profile = growth_profile(cfg.profile_id);
        FeSpace space(Mesh1D::uniform(n), FeFamily::LagrangeLinear, EssentialBc::None);
        ZetaCoefficients zc(profile, nullptr, nullptr, nullptr);
        PStepContext ctx(space, zc, TimeGrid::uniform(cfg.T, cfg.steps));
        auto w0 = [](double y) { return y * std::exp(-y * y); };
        auto dw0 = [](double y) { return (1.0 - 2.0 * y * y) * std::exp(-y * y); };
        auto hist = ctx.run(build_p_initial(space, zc, w0, dw0));
        table = monitors_csv(hist.times, hist.l2_norms, model_name(cfg.model));
        if (hist.flagged_unstable) rc.notes.push_back("run flagged unstable");
    } else {
        const BottomProfile profile = growth_profile(cfg.profile_id);
        FeSpace space(Mesh1D::uniform(n), FeFamily::LagrangeLinear);
        const BoundaryMode mode = cfg.model == ModelKind::AK ? BoundaryMode::AbrahamssonKreiss
                                                             : BoundaryMode::NeumannDynamical;
        CnStepContext ctx(space, growth_coefficients(profile), TimeGrid::uniform(cfg.T, cfg.steps),
                          mode);
        auto u0 = ctx.init_elliptic(
            [](double x) { return complexd(-x * std::pow(x - 1.0, 3)); },
            [](double x) {
                return complexd(-std::pow(x - 1.0, 3) - 3.0 * x * std::pow(x - 1.0, 2));
            });
        auto hist = ctx.run(u0);
        table = monitors_csv(hist.times, hist.l2_norms, model_name(cfg.model));
        if (hist.flagged_unstable) rc.notes.push_back("run flagged unstable");
        for (const auto& w : hist.warnings) rc.notes.push_back(w);
    }
    const fs::path path = out_dir / "solve.csv";
    write_csv(table, path.string());
    rc.outputs.push_back(path.string());
    return rc;
}

void write_manifest(const fs::path& out_dir, const std::string& config_text,
                    const RunConfig& cfg, const RunOutcome& rc) {
    std::ofstream out(out_dir / "manifest.txt", std::ios::binary);
    out << "model: " << model_name(cfg.model) << "\n";
    out << "outputs:\n";
    for (const auto& o : rc.outputs) out << "  " << fs::path(o).filename().string() << "\n";
    if (!cfg.annotations.empty() || !rc.notes.empty()) {
        out << "notes:\n";
        for (const auto& a : cfg.annotations) out << "  " << a << "\n";
        for (const auto& n : rc.notes) out << "  " << n << "\n";
    }
    out << "config:\n";
    std::istringstream in(config_text);
    std::string line;
    while (std::getline(in, line)) out << "  " << line << "\n";
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"1-D Galerkin finite-element experiments for strip-transformed "
                 "Schrodinger and parabolic problems with dynamical boundary conditions"};
    app.require_subcommand(1);

    std::string config_path, out_dir_str = ".";
    const char* names[] = {"converge", "wedge", "growth", "solve"};
    const Experiment kinds[] = {Experiment::Converge, Experiment::Wedge, Experiment::Growth,
                                Experiment::Solve};
    CLI::App* subs[4];
    for (int i = 0; i < 4; ++i) {
        subs[i] = app.add_subcommand(names[i]);
        subs[i]->add_option("--config", config_path, "run configuration file")->required();
        subs[i]->add_option("--out", out_dir_str, "output directory");
    }

    CLI11_PARSE(app, argc, argv);

    try {
        Experiment requested = Experiment::Converge;
        for (int i = 0; i < 4; ++i)
            if (subs[i]->parsed()) requested = kinds[i];

        const std::string text = read_file(config_path);
        const RunConfig cfg = parse_config(text);
        if (cfg.experiment != requested)
            throw std::runtime_error("config experiment does not match the subcommand");

        const fs::path out_dir(out_dir_str);
        fs::create_directories(out_dir);

        for (const auto& a : cfg.annotations) std::cerr << "note: " << a << "\n";

        RunOutcome rc;
        switch (cfg.experiment) {
            case Experiment::Converge: rc = run_converge(cfg, out_dir); break;
            case Experiment::Wedge: rc = run_wedge(cfg, out_dir); break;
            case Experiment::Growth: rc = run_growth(cfg, out_dir); break;
            case Experiment::Solve: rc = run_solve(cfg, out_dir); break;
        }
        write_manifest(out_dir, text, cfg, rc);
        for (const auto& n : rc.notes) std::cerr << "note: " << n << "\n";
        for (const auto& o : rc.outputs) std::cout << o << "\n";
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
