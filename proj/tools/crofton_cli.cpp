// crofton: sample point clouds, estimate boundary measure, run sweeps.
//
//   crofton sample   --shape disk --r 1 --n 1000 --seed 7 --out p.csv
//   crofton estimate --in p.csv --method dw --epsilon auto --k 50 --l 200 --seed 3
//   crofton bench    --shape disk --sweep 1000,4000 --reps 5 --method dw,alpha --alpha 0.5

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "crofton/crofton_all.hpp"

namespace {

using namespace crofton;

struct ShapeArgs {
    std::string name = "disk";
    std::map<std::string, double> values;

    void add(CLI::App* cmd) {
        cmd->add_option("--shape", name, "disk | annulus | rounded_square | peanut | ball | shell | torus");
        for (const char* key : {"r", "r1", "r2", "R", "side", "corner", "c", "bridge"}) {
            cmd->add_option_function<double>(std::string("--") + key, [this, key](double v) { values[key] = v; },
                                             std::string("shape parameter ") + key);
        }
    }

    Shape build() const { return make_shape(name, values); }
};

std::optional<double> parse_epsilon(const std::string& s) {
    if (s == "auto") return std::nullopt;
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        if (!(v > 0.0)) throw usage_error("epsilon must be positive or 'auto'");
        return v;
    } catch (const std::logic_error&) {
        throw usage_error("--epsilon expects a positive number or 'auto', got '" + s + "'");
    }
}

std::vector<std::string> split(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ','))
        if (!tok.empty()) out.push_back(tok);
    return out;
}

std::vector<std::size_t> parse_sweep(const std::string& s) {
    std::vector<std::size_t> out;
    for (const auto& tok : split(s)) {
        try {
            std::size_t used = 0;
            const long long v = std::stoll(tok, &used);
            if (used != tok.size() || v < 2) throw std::invalid_argument(tok);
            out.push_back(static_cast<std::size_t>(v));
        } catch (const std::logic_error&) {
            throw usage_error("--sweep expects comma-separated sample sizes >= 2, got '" + tok + "'");
        }
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Boundary measure estimation from point clouds via Crofton's formula"};
    app.require_subcommand(1);

    ShapeArgs sample_shape, bench_shape;
    std::size_t n = 1000;
    std::uint64_t seed = 0;
    std::string out_path, in_path, method = "dw", epsilon = "auto", sweep, source = "iid";
    double alpha = 0.0, t_end = 1.0, dt = 1e-3;
    int cap = 0, k = 50, l = 200, reps = 5;
    unsigned threads = default_threads();

    auto* sample = app.add_subcommand("sample", "write a point cloud to CSV");
    sample_shape.add(sample);
    sample->add_option("--n", n, "number of points (iid source)");
    sample->add_option("--seed", seed);
    sample->add_option("--out", out_path, "output CSV (stdout when omitted)");
    sample->add_option("--source", source, "iid | rbm");
    sample->add_option("--t-end", t_end, "rbm horizon");
    sample->add_option("--dt", dt, "rbm step");

    auto* estimate = app.add_subcommand("estimate", "estimate the boundary measure of a CSV cloud");
    estimate->add_option("--in", in_path, "input CSV")->required();
    estimate->add_option("--method", method, "dw | dw-capped | alpha");
    estimate->add_option("--epsilon", epsilon, "ball radius or 'auto'");
    estimate->add_option("--alpha", alpha, "alpha-hull radius (method alpha)");
    estimate->add_option("--cap", cap, "N0 (method dw-capped)");
    estimate->add_option("--k", k, "directions");
    estimate->add_option("--l", l, "lines per direction");
    estimate->add_option("--seed", seed);
    estimate->add_option("--threads", threads);

    auto* bench = app.add_subcommand("bench", "sweep sample sizes and write run records as CSV");
    bench_shape.add(bench);
    bench->add_option("--sweep", sweep, "comma-separated sample sizes");
    bench->add_option("--reps", reps, "replicates per size");
    bench->add_option("--method", method, "comma-separated methods");
    bench->add_option("--epsilon", epsilon, "ball radius or 'auto'");
    bench->add_option("--alpha", alpha, "alpha-hull radius");
    bench->add_option("--cap", cap, "N0 for dw-capped");
    bench->add_option("--k", k, "directions");
    bench->add_option("--l", l, "lines per direction");
    bench->add_option("--seed", seed);
    bench->add_option("--out", out_path, "output CSV (stdout when omitted)");
    bench->add_option("--threads", threads);

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return static_cast<int>(ErrorKind::usage);
    }

    try {
        if (*sample) {
            const Shape shape = sample_shape.build();
            PointCloud cloud;
            if (source == "iid") {
                cloud = sample_iid(shape, n, seed);
            } else if (source == "rbm") {
                RbmConfig cfg{shape};
                cfg.t_end = t_end;
                cfg.dt = dt;
                cfg.seed = seed;
                cloud = simulate_rbm(cfg);
            } else {
                throw usage_error("--source must be iid or rbm");
            }
            if (out_path.empty()) write_points(std::cout, cloud);
            else write_points(out_path, cloud);
        } else if (*estimate) {
            const PointCloud cloud = read_points(in_path);
            EstimateConfig cfg;
            cfg.method = parse_method(method);
            cfg.epsilon = parse_epsilon(epsilon);
            cfg.alpha = alpha;
            cfg.cap = cap;
            cfg.k = k;
            cfg.l = l;
            cfg.seed = seed;
            cfg.threads = threads;
            if (cfg.method == Method::alpha && cloud.dim() != 2)
                throw usage_error("method alpha is unsupported for d = " + std::to_string(cloud.dim()) + " (only d = 2)");
            const Estimate est = run_estimate(cloud, cfg);
            auto j = to_json(est);
            j["input"] = {{"path", in_path}, {"d", cloud.dim()}, {"provenance", to_string(cloud.provenance())}};
            std::cout << j.dump(2) << '\n';
        } else if (*bench) {
            BenchConfig cfg;
            cfg.shape = bench_shape.build();
            cfg.ns = parse_sweep(sweep);
            cfg.reps = reps;
            cfg.methods.clear();
            for (const auto& m : split(method)) cfg.methods.push_back(parse_method(m));
            if (cfg.methods.empty()) throw usage_error("--method needs at least one method");
            cfg.epsilon = parse_epsilon(epsilon);
            cfg.alpha = alpha;
            cfg.cap = cap;
            cfg.k = k;
            cfg.l = l;
            cfg.seed = seed;
            cfg.threads = threads;
            for (const Method m : cfg.methods) {
                if (m == Method::alpha && !(alpha > 0.0)) throw usage_error("method alpha needs --alpha > 0");
                if (m == Method::alpha && cfg.shape.dim() != 2) throw usage_error("method alpha is unsupported for d != 2");
                if (m == Method::dw_capped && cap < 2) throw usage_error("dw-capped needs --cap N0 >= 2");
            }

            std::ofstream file;
            if (!out_path.empty()) {
                file.open(out_path, std::ios::binary);
                if (!file) throw usage_error("cannot open '" + out_path + "' for writing");
            }
            std::ostream& os = out_path.empty() ? std::cout : file;
            os << RunRecord::header() << '\n';
            run_bench(cfg, [&](const RunRecord& r) { os << r.to_csv() << '\n' << std::flush; });
        }
    } catch (const Error& e) {
        std::cerr << "crofton: " << e.what() << '\n';
        return e.exit_code();
    } catch (const std::exception& e) {
        std::cerr << "crofton: internal error: " << e.what() << '\n';
        return static_cast<int>(ErrorKind::numerical);
    }
    return 0;
}
