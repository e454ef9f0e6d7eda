// degenhj_cli: solve | witness | regularity | peakon, driven by a sectioned key-value config.
//
// Exit codes: 0 success, 1 certificate failure, 2 configuration error, 3 numeric failure.

#include "degenhj/config.hpp"
#include "degenhj/error.hpp"
#include "degenhj/io.hpp"
#include "degenhj/peakon.hpp"
#include "degenhj/records.hpp"
#include "degenhj/regularity.hpp"
#include "degenhj/value_solver.hpp"
#include "degenhj/version.hpp"
#include "degenhj/witness.hpp"

#include <CLI11.hpp>
#include <omp.h>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace degenhj;

namespace {

constexpr int kExitCertificate = 1;
constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;

struct RunContext {
    Config config;
    fs::path config_dir;
    fs::path out;
    std::optional<std::uint64_t> seed_flag;
    int threads;
    std::string hash;
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
};

int exit_code_for(ErrorCode code) {
    switch (code) {
        case ErrorCode::Numeric:
        case ErrorCode::Divergence:
        case ErrorCode::EmptySample: return kExitNumeric;
        default: return kExitConfig;
    }
}

std::ofstream open_output(const RunContext& ctx, const std::string& name) {
    std::ofstream os(ctx.out / name, std::ios::binary);
    if (!os) throw Error(ErrorCode::Configuration, "cannot write " + (ctx.out / name).string());
    return os;
}

void write_csv(const RunContext& ctx, const std::string& name, const std::string& body) {
    auto os = open_output(ctx, name);
    os << csv_header_comment(ctx.hash) << body;
}

void write_json(const RunContext& ctx, const std::string& name, Record body) {
    Record doc;
    doc["config_hash"] = ctx.hash;
    for (auto& [k, v] : body.items()) doc[k] = v;
    open_output(ctx, name) << doc.dump(2) << '\n';
}

void write_manifest(const RunContext& ctx, const std::string& command, std::uint64_t seed, const std::vector<std::string>& outputs) {
    Record m;
    m["config_hash"] = ctx.hash;
    m["command"] = command;
    m["version"] = kVersion;
    m["seed"] = seed;
    m["threads"] = ctx.threads;
    m["config"] = ctx.config.text();
    m["outputs"] = outputs;
    m["wall_time_s"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - ctx.start).count();
    open_output(ctx, "manifest.json") << m.dump(2) << '\n';
}

std::uint64_t resolve_seed(const RunContext& ctx, Config::Section& sec) {
    const std::uint64_t from_config = sec.get_u64("seed", 1);
    return ctx.seed_flag.value_or(from_config);
}

fs::path resolve_path(const RunContext& ctx, const std::string& p) {
    const fs::path path(p);
    return path.is_absolute() ? path : ctx.config_dir / path;
}

// ---- [solve] ---------------------------------------------------------------

struct SolveSetup {
    GridSpec spec;
    TerminalData terminal;
    ControlSet controls;
    bool reference = false;
};

TerminalData read_terminal(Config::Section& sec, std::size_t dim) {
    const std::string kind = sec.get_string("terminal");
    if (kind == "constant") return constant_terminal(sec.get_double("value", 0.0));
    if (kind == "clamped_distance") {
        const auto c = sec.get_doubles("center", std::vector<double>(dim, 0.0));
        if (c.size() != dim) throw Error(ErrorCode::Configuration, sec.where("center") + ": center needs dim entries");
        return clamped_distance_terminal(Vector::Map(c.data(), static_cast<Eigen::Index>(dim)), sec.get_double("radius"));
    }
    if (kind == "sine_product") return sine_product_terminal(sec.get_double("scale", 1.0), sec.get_double("frequency", 1.0));
    throw Error(ErrorCode::Configuration, sec.where("terminal") + ": unknown terminal '" + kind + "'");
}

SolveSetup read_solve(Config::Section& sec) {
    SolveSetup s;
    s.spec.dim = sec.get_size("dim");
    if (s.spec.dim < 1) throw Error(ErrorCode::Configuration, sec.where("dim") + ": dim must be >= 1");
    s.spec.lo = sec.get_double("lo");
    s.spec.hi = sec.get_double("hi");
    s.spec.nx = sec.get_size("nx");
    if (s.spec.nx < 3) throw Error(ErrorCode::Configuration, sec.where("nx") + ": nx must be at least 3");
    s.spec.T = sec.get_double("T");
    if (!(s.spec.T > 0.0)) throw Error(ErrorCode::Configuration, sec.where("T") + ": T must be positive");
    if (!(s.spec.hi > s.spec.lo)) throw Error(ErrorCode::Configuration, sec.where("hi") + ": need lo < hi");
    s.terminal = read_terminal(sec, s.spec.dim);
    const double B = global_sqrt_kernel_bound(s.spec.dim);
    s.controls = ControlSet::standard(s.spec.dim, s.terminal.L, B, sec.get_size("n_radii", 16), sec.get_size("n_angles", 32));
    const std::size_t nt = sec.get_size("nt", 0);
    s.spec.nt = nt == 0 ? cfl_time_slices(s.spec, s.controls, B) : nt;
    s.reference = sec.get_bool("reference", false);
    return s;
}

ValueGrid run_solver(const SolveSetup& s) {
    return s.reference ? solve_reference(s.spec, s.terminal, s.controls) : solve(s.spec, s.terminal, s.controls);
}

int cmd_solve(RunContext& ctx) {
    auto sec = ctx.config.section("solve");
    const SolveSetup setup = read_solve(sec);
    const std::uint64_t seed = resolve_seed(ctx, sec);
    sec.finish();
    const ValueGrid grid = run_solver(setup);
    std::ostringstream body;
    write_grid_csv(body, grid);
    write_csv(ctx, "grid.csv", body.str());
    write_manifest(ctx, "solve", seed, {"grid.csv"});
    return 0;
}

// ---- [witness] -------------------------------------------------------------

struct PairLine {
    Vector y;
    Vector y_tilde;
    std::size_t line;
};

std::vector<PairLine> read_pairs(const fs::path& path) {
    std::ifstream is(path);
    if (!is) throw Error(ErrorCode::Configuration, "cannot open pair list '" + path.string() + "'");
    std::vector<PairLine> out;
    std::string line;
    std::size_t n = 0;
    while (std::getline(is, line)) {
        ++n;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::vector<double> v;
        double x = 0.0;
        while (ls >> x) v.push_back(x);
        if (!ls.eof()) throw Error(ErrorCode::Configuration, path.string() + ":" + std::to_string(n) + ": not a number");
        if (v.empty()) continue;
        if (v.size() != 4) {
            throw Error(ErrorCode::Configuration, path.string() + ":" + std::to_string(n) + ": expected 'y1 y2 yt1 yt2'");
        }
        out.push_back({Vector::Map(v.data(), 2), Vector::Map(v.data() + 2, 2), n});
    }
    return out;
}

int cmd_witness(RunContext& ctx) {
    auto sec = ctx.config.section("witness");
    const fs::path pairs_path = resolve_path(ctx, sec.get_string("pairs"));
    const std::string lemma = sec.get_string("lemma");
    const double t = sec.get_double("t", 0.0);
    const double tol = sec.get_double("tol", 1e-6);
    WitnessOptions opts;
    opts.lipschitz = sec.get_double("lipschitz", 1.0);
    opts.horizon = sec.get_double("horizon", std::numeric_limits<double>::infinity());
    opts.initial_segments = sec.get_size("initial_segments", opts.initial_segments);
    const std::uint64_t seed = resolve_seed(ctx, sec);
    sec.finish();
    if (lemma != "diagonal_to_point" && lemma != "along_diagonal" && lemma != "straight_holder" &&
        lemma != "straight_lipschitz" && lemma != "chain") {
        throw Error(ErrorCode::Configuration, sec.where("lemma") + ": unknown lemma '" + lemma + "'");
    }
    if (!(tol > 0.0)) throw Error(ErrorCode::Configuration, sec.where("tol") + ": tol must be positive");
    const auto pairs = read_pairs(pairs_path);
    if (pairs.empty()) throw Error(ErrorCode::Configuration, pairs_path.string() + ": pair list is empty");

    Record records = Record::array();
    std::ostringstream csv;
    csv << "line,y_1,y_2,yt_1,yt_2,status,energy,energy_bound,c\n";
    bool all_valid = true;
    for (const auto& p : pairs) {
        Record r;
        r["line"] = p.line;
        std::string status;
        double energy = 0.0, bound = 0.0, c = 0.0;
        try {
            const ConfigPoint y(p.y), yt(p.y_tilde);
            std::vector<WitnessCertificate> legs;
            if (lemma == "diagonal_to_point") legs.push_back(witness_diagonal_to_point(y, yt, t, opts));
            if (lemma == "along_diagonal") legs.push_back(witness_along_diagonal(y, yt, t, opts));
            if (lemma == "straight_holder") legs.push_back(witness_straight_offdiagonal(y, yt, t, StraightMode::Holder, opts));
            if (lemma == "straight_lipschitz") {
                legs.push_back(witness_straight_offdiagonal(y, yt, t, StraightMode::Lipschitz, opts));
            }
            if (lemma == "chain") legs = witness_chain(y, yt, t, opts).legs;
            bool valid = true;
            Record leg_records = Record::array();
            for (const auto& cert : legs) {
                const auto report = verify_certificate(cert, tol);
                valid = valid && report.valid();
                energy += report.energy;
                bound += report.energy_bound;
                c = std::max(c, cert.c);
                leg_records.push_back(certificate_record(cert, report));
            }
            status = valid ? "valid" : "invalid";
            r["status"] = status;
            r["legs"] = leg_records;
        } catch (const Error& e) {
            if (e.code() == ErrorCode::Numeric || e.code() == ErrorCode::Divergence) throw;
            status = e.code() == ErrorCode::OutOfScope ? "out_of_scope" : "rejected";
            r["status"] = status;
            r["error"] = e.what();
        }
        all_valid = all_valid && status == "valid";
        records.push_back(r);
        csv << p.line << ',' << format_double(p.y(0)) << ',' << format_double(p.y(1)) << ','
            << format_double(p.y_tilde(0)) << ',' << format_double(p.y_tilde(1)) << ',' << status << ','
            << format_double(energy) << ',' << format_double(bound) << ',' << format_double(c) << '\n';
    }
    Record body;
    body["lemma"] = lemma;
    body["tol"] = tol;
    body["all_valid"] = all_valid;
    body["certificates"] = records;
    write_json(ctx, "certificates.json", body);
    write_csv(ctx, "certificates.csv", csv.str());
    write_manifest(ctx, "witness", seed, {"certificates.json", "certificates.csv"});
    return all_valid ? 0 : kExitCertificate;
}

// ---- [regularity] ----------------------------------------------------------

int cmd_regularity(RunContext& ctx) {
    auto solve_sec = ctx.config.section("solve");
    if (!ctx.config.has_section("solve")) {
        throw Error(ErrorCode::Configuration, ctx.config.source() + ": regularity needs a [solve] section");
    }
    auto sec = ctx.config.section("regularity");
    const SolveSetup setup = read_solve(solve_sec);
    (void)solve_sec.get_u64("seed", 1);
    solve_sec.finish();
    const std::optional<std::string> grid_file =
        sec.has("grid") ? std::optional<std::string>(sec.get_string("grid")) : std::nullopt;
    const std::uint64_t seed = resolve_seed(ctx, sec);
    const std::size_t time_samples = sec.get_size("time_samples", 20000);
    HolderOptions ho;
    ho.seed = seed;
    ho.samples = sec.get_size("samples", 400);
    ho.min_pairs = sec.get_size("min_pairs", 200);
    ho.dist_lo = sec.get_double("dist_lo", 0.0);
    ho.dist_hi = sec.get_double("dist_hi", 0.5);
    ho.scheme_error = sec.get_double("scheme_error", ho.scheme_error);
    ho.min_decades = sec.get_double("min_decades", ho.min_decades);
    if (sec.has("window")) {
        const auto w = sec.get_doubles("window");
        if (w.size() != 2 || !(w[0] < w[1])) throw Error(ErrorCode::Configuration, sec.where("window") + ": window is 'lo hi'");
        ho.window = std::make_pair(w[0], w[1]);
    }
    const double t_max = sec.get_double("t_max", setup.spec.T);
    const std::vector<double> deltas = sec.get_doubles("deltas", std::vector<double>{0.5});
    const std::size_t pool = sec.get_size("delta_pool", 4000);
    sec.finish();

    std::optional<ValueGrid> grid;
    if (grid_file) {
        const fs::path path = resolve_path(ctx, *grid_file);
        std::ifstream is(path);
        if (!is) throw Error(ErrorCode::Configuration, "cannot open grid '" + path.string() + "'");
        grid.emplace(read_grid_csv(is, setup.terminal, setup.controls.a_max(), global_sqrt_kernel_bound(setup.spec.dim)));
    } else {
        grid.emplace(run_solver(setup));
    }
    for (std::size_t k = 0; k < grid->spec().nt; ++k) {
        if (grid->spec().time(k) <= t_max + 1e-12) ho.slices.push_back(k);
    }

    Record body;
    body["time_lipschitz"] = time_lipschitz_record(estimate_time_lipschitz(*grid, time_samples, seed));
    std::vector<std::string> outputs{"regularity.json"};
    if (grid->spec().dim == 2) {
        Record fits = Record::object();
        const std::pair<std::string, Region> regions[] = {{"cross_diagonal", {RegionTag::Diagonal, 0.0}},
                                                          {"omega_half", Region::omega_delta(0.5)}};
        for (const auto& [name, region] : regions) {
            ho.region = region;
            const HolderFit fit = estimate_space_holder(*grid, ho);
            fits[name] = holder_fit_record(fit);
            std::ostringstream pairs;
            write_pairs_csv(pairs, fit.pairs);
            write_csv(ctx, "pairs_" + name + ".csv", pairs.str());
            outputs.push_back("pairs_" + name + ".csv");
        }
        body["holder_fits"] = fits;
        body["flat"] = fits["cross_diagonal"]["flat"].get<bool>() && fits["omega_half"]["flat"].get<bool>();
        Record lip = Record::array();
        OmegaDeltaOptions od;
        od.seed = seed;
        od.samples = pool;
        od.dist_hi = ho.dist_hi;
        od.slices = ho.slices;
        od.window = ho.window;
        for (const double d : deltas) {
            lip.push_back({{"delta", d}, {"C_hat", estimate_lipschitz_omega_delta(*grid, d, od)}});
        }
        body["lipschitz_omega_delta"] = lip;
    }
    write_json(ctx, "regularity.json", body);
    write_manifest(ctx, "regularity", seed, outputs);
    return 0;
}

// ---- [peakon] --------------------------------------------------------------

int cmd_peakon(RunContext& ctx) {
    auto sec = ctx.config.section("peakon");
    const auto q = sec.get_doubles("q");
    const auto p = sec.get_doubles("p");
    if (q.size() != p.size()) throw Error(ErrorCode::Configuration, sec.where("p") + ": q and p need the same length");
    const double T = sec.get_double("T");
    const double dt = sec.get_double("dt");
    if (!(dt > 0.0)) throw Error(ErrorCode::Configuration, sec.where("dt") + ": dt must be positive");
    if (!(T >= 0.0)) throw Error(ErrorCode::Configuration, sec.where("T") + ": T must be >= 0");
    const std::size_t every = sec.get_size("record_every", 1);
    const auto field_range = sec.get_doubles("field_range", std::vector<double>{-10.0, 10.0});
    const std::size_t field_n = sec.get_size("field_points", 401);
    const std::uint64_t seed = resolve_seed(ctx, sec);
    sec.finish();
    if (field_range.size() != 2 || !(field_range[0] < field_range[1]) || field_n < 2) {
        throw Error(ErrorCode::Configuration, sec.where("field_range") + ": need 'lo hi' with lo < hi and field_points >= 2");
    }
    PeakonState s0{Vector::Map(q.data(), static_cast<Eigen::Index>(q.size())),
                   Vector::Map(p.data(), static_cast<Eigen::Index>(p.size())), 0.0};

    auto emit = [&](const PeakonRun& run, bool diverged) {
        std::ostringstream traj;
        write_peakon_csv(traj, run);
        write_csv(ctx, "trajectory.csv", traj.str());
        std::vector<double> xs(field_n);
        for (std::size_t i = 0; i < field_n; ++i) {
            xs[i] = field_range[0] + (field_range[1] - field_range[0]) * static_cast<double>(i) / static_cast<double>(field_n - 1);
        }
        const auto u = peakon_field(run.states.back(), xs);
        std::ostringstream field;
        field << "x,u\n";
        for (std::size_t i = 0; i < field_n; ++i) field << format_double(xs[i]) << ',' << format_double(u[i]) << '\n';
        write_csv(ctx, "field.csv", field.str());
        Record body;
        body["diverged"] = diverged;
        body["t_final"] = run.states.back().t;
        body["H0"] = run.H0;
        body["sum_p0"] = run.momentum0;
        body["max_rel_energy_drift"] = run.max_rel_energy_drift;
        body["max_momentum_drift"] = run.max_momentum_drift;
        body["min_separation"] = run.min_separation;
        body["near_collision"] = run.near_collision;
        write_json(ctx, "summary.json", body);
        write_manifest(ctx, "peakon", seed, {"trajectory.csv", "field.csv", "summary.json"});
    };
    try {
        emit(integrate_peakons(s0, T, dt, every), false);
    } catch (const PeakonDivergence& e) {
        emit(e.partial(), true);
        std::cerr << e.what() << '\n';
        return kExitNumeric;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Value functions, witness certificates and peakon runs for the degenerate HJ problem"};
    app.require_subcommand(1);
    std::string config_path;
    std::string out_dir = "out";
    std::optional<std::uint64_t> seed;
    int threads = 0;
    app.add_option("--config", config_path, "key-value config file")->required();
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--seed", seed, "random seed (overrides the config)");
    app.add_option("--threads", threads, "OpenMP threads (0 = runtime default)")->check(CLI::NonNegativeNumber);
    for (const char* name : {"solve", "witness", "regularity", "peakon"}) app.add_subcommand(name)->fallthrough();
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitConfig;
    }
    const std::string command = app.get_subcommands().front()->get_name();
    try {
        if (threads > 0) omp_set_num_threads(threads);
        RunContext ctx{Config::load(config_path), fs::path(config_path).parent_path(), out_dir, seed,
                       threads > 0 ? threads : omp_get_max_threads(), {}};
        std::string hashed = ctx.config.text();
        if (seed) hashed += "\n--seed=" + std::to_string(*seed);
        ctx.hash = hex64(fnv1a64(hashed));
        fs::create_directories(ctx.out);
        if (command == "solve") return cmd_solve(ctx);
        if (command == "witness") return cmd_witness(ctx);
        if (command == "regularity") return cmd_regularity(ctx);
        return cmd_peakon(ctx);
    } catch (const Error& e) {
        std::cerr << e.what() << '\n';
        return exit_code_for(e.code());
    } catch (const fs::filesystem_error& e) {
        std::cerr << e.what() << '\n';
        return kExitConfig;
    }
}
