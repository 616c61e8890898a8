// mbrlab: multiple-basis state toolkit.
//   subcommands: groundstate, tomography, mub, analysis, selftest
// Exit codes: 0 success, 1 validation error, 2 numerical failure.
#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "acceptance.hpp"
#include "mbrlab/analysis.hpp"
#include "mbrlab/groundstate.hpp"
#include "mbrlab/io_util.hpp"
#include "mbrlab/mbr_state.hpp"
#include "mbrlab/mub.hpp"
#include "mbrlab/qcore.hpp"
#include "mbrlab/tomography.hpp"

namespace {

using namespace mbrlab;

constexpr std::uint64_t kDefaultSeed = 0xA11CE;

struct NumericalFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::pair<int, int> parse_lattice(const std::string& spec) {
    auto x = spec.find('x');
    if (x == std::string::npos) throw CLI::ValidationError("--lattice", "expected RxC, e.g. 4x4");
    return {std::stoi(spec.substr(0, x)), std::stoi(spec.substr(x + 1))};
}

struct EpsGrid {
    double lo = 0.0, hi = 1.0;
    int count = 50;
};

EpsGrid parse_eps_grid(const std::string& spec) {
    EpsGrid g;
    std::istringstream is(spec);
    char c1, c2;
    if (!(is >> g.lo >> c1 >> g.hi >> c2 >> g.count) || c1 != ':' || c2 != ':' || g.count < 1)
        throw CLI::ValidationError("--eps-grid", "expected lo:hi:count");
    return g;
}

int run_groundstate(const std::string& graph_file, const std::string& lattice, double j,
                    double h_min, double h_max, int h_steps, int dh, std::size_t cap,
                    const std::string& out) {
    groundstate::GraphSpec graph;
    if (!lattice.empty()) {
        auto [r, c] = parse_lattice(lattice);
        graph = groundstate::GraphSpec::square_lattice(r, c);
    } else if (!graph_file.empty()) {
        graph = groundstate::GraphSpec::from_text(read_file(graph_file));
    } else {
        throw CLI::ValidationError("groundstate", "need --graph or --lattice");
    }
    auto rows = groundstate::sweep(graph, j, h_min, h_max, h_steps, dh, cap);
    std::ostringstream os;
    os << "h,J,dh,subspace_dim,e_mbr,e_exact,abs_gap\n";
    for (const auto& r : rows)
        os << fmt17(r.h) << ',' << fmt17(r.J) << ',' << r.radius << ',' << r.subspace_dim << ','
           << fmt17(r.e_mbr) << ',' << fmt17(r.e_exact) << ',' << fmt17(r.abs_gap) << "\n";
    atomic_write_file(out, os.str());
    return 0;
}

std::vector<Circuit> load_bases_dir(const std::string& dir, int n) {
    namespace fs = std::filesystem;
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir))
        if (entry.is_regular_file()) files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    std::vector<Circuit> bases;
    for (const auto& f : files) {
        Circuit c = Circuit::from_text(read_file(f.string()));
        if (c.n_qubits != n)
            throw std::invalid_argument("basis circuit " + f.string() + " has wrong qubit count");
        bases.push_back(std::move(c));
    }
    if (bases.empty()) throw std::invalid_argument("no circuit files in " + dir);
    return bases;
}

int run_tomography(const std::string& state_file, const std::string& random_mbr,
                   const std::string& bases_dir, std::uint64_t m, std::uint64_t mh, double eps,
                   double delta, const std::string& mode, std::uint64_t seed,
                   const std::string& out) {
    MbrState truth_state;
    if (!state_file.empty()) {
        truth_state = MbrState::load(state_file);
    } else if (!random_mbr.empty()) {
        int n, b, k;
        std::uint64_t s;
        char c1, c2, c3;
        std::istringstream is(random_mbr);
        if (!(is >> n >> c1 >> b >> c2 >> k >> c3 >> s) || c1 != ',' || c2 != ',' || c3 != ',')
            throw CLI::ValidationError("--random-mbr", "expected n,B,K,seed");
        mub::MubFamily fam = mub::complete_mub_set(1);
        std::vector<Circuit> all = mub::tensor_power_family(fam, n);
        if (b > int(all.size()))
            throw std::invalid_argument("--random-mbr: B exceeds the generated family size");
        std::mt19937_64 rng(s);
        truth_state.bases.assign(all.begin(), all.begin() + b);
        std::uniform_real_distribution<double> unif(0.5, 1.0);
        std::normal_distribution<double> gauss;
        for (int bb = 0; bb < b; ++bb) {
            truth_state.weights.push_back(unif(rng));
            std::vector<std::uint64_t> support;
            std::uniform_int_distribution<std::uint64_t> pick(0, (std::uint64_t(1) << n) - 1);
            while (int(support.size()) < k) {
                std::uint64_t idx = pick(rng);
                if (std::find(support.begin(), support.end(), idx) == support.end())
                    support.push_back(idx);
            }
            std::vector<cplx> cs;
            for (int i = 0; i < k; ++i) cs.emplace_back(gauss(rng), gauss(rng));
            truth_state.components.emplace_back(n, support, cs);
        }
    } else {
        throw CLI::ValidationError("tomography", "need --state or --random-mbr");
    }
    StateVector truth = assemble(truth_state);
    truth.normalize();
    std::vector<Circuit> bases = bases_dir.empty()
                                     ? truth_state.bases
                                     : load_bases_dir(bases_dir, truth.n_qubits);
    tomography::FMode fmode;
    if (mode == "exact-F")
        fmode = tomography::FMode::exact;
    else if (mode == "noisy-F")
        fmode = tomography::FMode::noisy;
    else
        throw CLI::ValidationError("--mode", "must be exact-F or noisy-F");
    auto report = tomography::tomography_pipeline(truth, bases, m, mh, eps, delta, seed, fmode);
    atomic_write_file(out, report.to_json());
    return 0;
}

int run_mub_verify(const std::string& file_a, const std::string& file_b, double tol) {
    Circuit a = Circuit::from_text(read_file(file_a));
    Circuit b = Circuit::from_text(read_file(file_b));
    auto res = mub::verify_mub(a, b, tol);
    std::cout << (res.unbiased ? "UNBIASED" : "NOT_UNBIASED") << " max_dev=" << fmt17(res.max_deviation)
              << "\n";
    return 0;
}

int run_mub_make(int l, int n, const std::string& out_dir) {
    mub::MubFamily fam = mub::complete_mub_set(l);
    std::vector<Circuit> bases = n == l ? fam.bases : mub::tensor_power_family(fam, n);
    std::filesystem::create_directories(out_dir);
    for (std::size_t i = 0; i < bases.size(); ++i) {
        char name[32];
        std::snprintf(name, sizeof name, "basis_%02zu.txt", i);
        atomic_write_file((std::filesystem::path(out_dir) / name).string(), bases[i].to_text());
    }
    std::cout << "wrote " << bases.size() << " bases to " << out_dir << "\n";
    return 0;
}

int run_mub_count(int n, int l) {
    auto c = mub::count_mub_combinatorics(n, l);
    std::cout << "log_sets=" << fmt17(c.log_sets) << " log_partitions=" << fmt17(c.log_partitions)
              << " log_total=" << fmt17(c.log_total) << "\n";
    return 0;
}

int run_analysis_volume(int n, int k, const std::string& grid_spec, int mc_trials,
                        std::uint64_t seed, const std::string& out) {
    EpsGrid grid = parse_eps_grid(grid_spec);
    std::ostringstream os;
    os << "# seed=" << seed << "\n";
    os << "eps,beta,gauss,mc,mc_stderr\n";
    for (int i = 0; i < grid.count; ++i) {
        double eps = grid.count == 1
                         ? grid.lo
                         : grid.lo + (grid.hi - grid.lo) * double(i) / (grid.count - 1);
        analysis::VolumeQuery q{n, k, eps};
        double beta = analysis::sparse_volume_prob(q);
        double gauss = analysis::gaussian_volume_approx(q);
        auto mc = analysis::haar_volume_mc(q, mc_trials, derive_seed(seed, std::uint64_t(i)));
        os << fmt17(eps) << ',' << fmt17(beta) << ',' << fmt17(gauss) << ',' << fmt17(mc.fraction)
           << ',' << fmt17(mc.stderr_) << "\n";
    }
    atomic_write_file(out, os.str());
    return 0;
}

int run_analysis_lcu(const std::string& mbr_file) {
    MbrState m = MbrState::load(mbr_file);
    std::size_t kmax = 0;
    for (const auto& comp : m.components) kmax = std::max(kmax, comp.k());
    analysis::LcuInstance inst = analysis::lcu_instance_of(m, int(kmax));
    double simulated = analysis::lcu_simulate(m);
    double general = analysis::lcu_success_bound(inst, analysis::LcuBoundMode::general);
    double mubb = analysis::lcu_success_bound(inst, analysis::LcuBoundMode::mub);
    std::cout << "simulated=" << fmt17(simulated) << " bound_general=" << fmt17(general)
              << " bound_mub=" << fmt17(mubb) << "\n";
    return 0;
}

int run_analysis_depth(const std::string& params_file) {
    auto doc = nlohmann::json::parse(read_file(params_file));
    analysis::DepthParams p;
    p.n = doc.at("n").get<int>();
    p.k = doc.at("K").get<int>();
    p.b = doc.at("B").get<int>();
    p.eps = doc.at("eps").get<double>();
    p.d_w = doc.at("dW").get<double>();
    p.d_u = doc.at("dU").get<double>();
    p.d_k = doc.at("dK").get<double>();
    p.delta = doc.at("delta").get<double>();
    p.alpha = doc.at("alpha").get<std::vector<double>>();
    p.max_f = doc.value("maxF", 0.0);
    auto b = analysis::depth_bounds(p);
    std::cout << "m_lower=" << fmt17(b.m_lower) << " d_lower=" << fmt17(b.d_lower)
              << " D_upper=" << fmt17(b.d_upper) << " (order estimates, implicit constant 1)\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"multiple-basis state toolkit"};
    app.require_subcommand(1);

    // groundstate
    auto* gs = app.add_subcommand("groundstate", "TFIM subspace sweep");
    std::string gs_graph, gs_lattice, gs_out = "sweep.csv";
    double gs_j = 1.0, gs_hmin = 0.0, gs_hmax = 6.0;
    int gs_steps = 25, gs_dh = 1;
    std::size_t gs_cap = 4096;
    gs->add_option("--graph", gs_graph, "graph file (nodes N, then u v per line)");
    gs->add_option("--lattice", gs_lattice, "open-boundary square lattice, e.g. 4x4");
    gs->add_option("--J", gs_j, "XX coupling");
    gs->add_option("--h-min", gs_hmin);
    gs->add_option("--h-max", gs_hmax);
    gs->add_option("--h-steps", gs_steps);
    gs->add_option("--dh", gs_dh, "Hamming-ball radius");
    gs->add_option("--cap", gs_cap, "per-basis support cap");
    gs->add_option("--out", gs_out, "output CSV");

    // tomography
    auto* tm = app.add_subcommand("tomography", "MBR tomography simulation");
    std::string tm_state, tm_random, tm_bases, tm_mode = "exact-F", tm_out = "report.json";
    std::uint64_t tm_m = 100000, tm_mh = 1000000, tm_seed = kDefaultSeed;
    double tm_eps = 0.05, tm_delta = 0.05;
    tm->add_option("--state", tm_state, "MBR JSON file holding the truth state");
    tm->add_option("--random-mbr", tm_random, "n,B,K,seed random truth");
    tm->add_option("--bases", tm_bases, "directory of circuit files (defaults to truth bases)");
    tm->add_option("--M", tm_m, "sampling budget per basis");
    tm->add_option("--MH", tm_mh, "Hadamard-test budget per basis");
    tm->add_option("--eps", tm_eps);
    tm->add_option("--delta", tm_delta);
    tm->add_option("--mode", tm_mode, "exact-F or noisy-F");
    tm->add_option("--seed", tm_seed);
    tm->add_option("--out", tm_out, "report JSON path");

    // mub
    auto* mb = app.add_subcommand("mub", "mutually unbiased bases tools");
    mb->require_subcommand(1);
    auto* mbv = mb->add_subcommand("verify", "check a pair of circuits");
    std::string mb_a, mb_b;
    double mb_tol = 1e-9;
    mbv->add_option("--circuit-a", mb_a)->required();
    mbv->add_option("--circuit-b", mb_b)->required();
    mbv->add_option("--tol", mb_tol);
    auto* mbm = mb->add_subcommand("make", "write a complete or tensor-power family");
    int mbm_l = 1, mbm_n = 0;
    std::string mbm_out = "bases";
    mbm->add_option("--l", mbm_l, "block size, 1-3")->required();
    mbm->add_option("--n", mbm_n, "total qubits (default l)");
    mbm->add_option("--out", mbm_out, "output directory");
    auto* mbc = mb->add_subcommand("count", "local-MUB counting formulas");
    int mbc_n = 4, mbc_l = 2;
    mbc->add_option("--n", mbc_n)->required();
    mbc->add_option("--l", mbc_l)->required();

    // analysis
    auto* an = app.add_subcommand("analysis", "bound calculators");
    an->require_subcommand(1);
    auto* anv = an->add_subcommand("volume", "sparse-approximation volume");
    int anv_n = 10, anv_k = 8, anv_trials = 20000;
    std::string anv_grid = "0:1:50", anv_out = "volume.csv";
    std::uint64_t anv_seed = kDefaultSeed;
    anv->add_option("--n", anv_n)->required();
    anv->add_option("--K", anv_k)->required();
    anv->add_option("--eps-grid", anv_grid, "lo:hi:count");
    anv->add_option("--mc-trials", anv_trials);
    anv->add_option("--seed", anv_seed);
    anv->add_option("--out", anv_out);
    auto* anl = an->add_subcommand("lcu", "success probability of the LCU loader");
    std::string anl_mbr;
    anl->add_option("--mbr", anl_mbr, "MBR JSON file")->required();
    auto* and_ = an->add_subcommand("depth", "depth bound estimates");
    std::string and_params;
    and_->add_option("--params", and_params, "JSON parameter file")->required();

    // selftest
    auto* st = app.add_subcommand("selftest", "run the acceptance suite");
    bool st_quick = false;
    st->add_flag("--quick", st_quick, "fast subset (< 2 minutes)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (gs->parsed())
            return run_groundstate(gs_graph, gs_lattice, gs_j, gs_hmin, gs_hmax, gs_steps, gs_dh,
                                   gs_cap, gs_out);
        if (tm->parsed())
            return run_tomography(tm_state, tm_random, tm_bases, tm_m, tm_mh, tm_eps, tm_delta,
                                  tm_mode, tm_seed, tm_out);
        if (mb->parsed()) {
            if (mbv->parsed()) return run_mub_verify(mb_a, mb_b, mb_tol);
            if (mbm->parsed()) return run_mub_make(mbm_l, mbm_n == 0 ? mbm_l : mbm_n, mbm_out);
            if (mbc->parsed()) return run_mub_count(mbc_n, mbc_l);
        }
        if (an->parsed()) {
            if (anv->parsed())
                return run_analysis_volume(anv_n, anv_k, anv_grid, anv_trials, anv_seed, anv_out);
            if (anl->parsed()) return run_analysis_lcu(anl_mbr);
            if (and_->parsed()) return run_analysis_depth(and_params);
        }
        if (st->parsed()) {
            return mbrlab_acceptance::run_suite(st_quick ? mbrlab_acceptance::Scope::quick
                                                         : mbrlab_acceptance::Scope::full,
                                                std::cout)
                       ? 0
                       : 2;
        }
    } catch (const CLI::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 2;
    }
    return 1;
}
