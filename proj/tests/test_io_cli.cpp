#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include <icpp/io.hpp>
#include <icpp/simulate.hpp>

#include "oracles.hpp"

using namespace icpp;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("icpp_test_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(ICPP_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    return std::system(cmd.c_str());
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("event and count files round-trip") {
    const fs::path dir = fresh_dir("roundtrip");
    SplitMix64 rng(3);
    const EventSequence seq =
        sample_hawkes(Kernel(ExpKernel{0.6, 0.8}), Exogenous(SinePlus{2.0}), 30.0, rng);

    const std::string epath = (dir / "events.csv").string();
    write_events_csv(epath, seq);
    const EventSequence back = read_events_csv(epath, 30.0);
    REQUIRE(back.events.size() == seq.events.size());
    for (std::size_t i = 0; i < seq.events.size(); ++i) {
        REQUIRE(back.events[i].time == seq.events[i].time); // full-precision round-trip
        REQUIRE(back.events[i].label == seq.events[i].label);
    }

    const CensoredSeries counts = censor(seq, equidistant_boundaries(30.0, 12));
    const std::string cpath = (dir / "counts.csv").string();
    write_counts_csv(cpath, counts);
    const CensoredSeries cback = read_counts_csv(cpath);
    REQUIRE(cback.boundaries == counts.boundaries);
    REQUIRE(cback.counts == counts.counts);
}

TEST_CASE("kernel and exogenous specs round-trip through JSON") {
    for (const Kernel& k :
         {Kernel(ExpKernel{0.6, 0.8}), Kernel(PowerLawKernel{0.5, 1.3, 0.7})}) {
        const Kernel back = kernel_from_json(to_json(k));
        for (double t : {0.1, 1.0, 5.0})
            REQUIRE(back.eval(t) == k.eval(t));
    }
    const std::vector<Exogenous> exos = {
        Exogenous(Impulse{2.0}),
        Exogenous(MultiImpulse{{1.0, 2.5}}),
        Exogenous(Rect{0.5, 3.0, 2.0}),
        Exogenous(PiecewiseConstant{{0, 1, 4}, {2.0, 0.5}}),
        Exogenous(Dassios{3.0, 0.5, 2.0}),
        Exogenous(SinePlus{1.5}),
        Exogenous(Augmented{1.0, 0.5, 2.0, PiecewiseConstant{{0, 1, 2}, {3.0, 4.0}}}),
    };
    for (const auto& e : exos) {
        const Exogenous back = exogenous_from_json(to_json(e));
        for (double t : {0.3, 1.7, 3.9})
            REQUIRE(back.integral(t) == e.integral(t));
    }
}

TEST_CASE("fit results serialize with their diagnostics") {
    FitResult r;
    r.param_names = {"kappa", "theta"};
    r.params = {0.61, 0.79};
    r.loss = -12.5;
    r.converged = true;
    r.restarts = 3;
    r.at_bound = {false, true};
    r.model = "mbpp-closed";
    r.kernel = "exponential";
    r.loss_name = "icll";
    r.scenario = "D";
    const json j = to_json(r);
    CHECK(j.at("params").at("kappa") == 0.61);
    CHECK(j.at("at_bound")[1] == true);
    CHECK(j.at("scenario") == "D");
}

TEST_CASE("cli pipeline: simulate, censor, fit") {
    const fs::path dir = fresh_dir("pipeline");
    std::ofstream(dir / "config.json")
        << R"({"kernel": {"type": "exponential", "kappa": 0.6, "theta": 0.8},
               "exogenous": {"type": "sineplus", "alpha": 2.0}})";
    const std::string cfg = " --config " + (dir / "config.json").string();

    REQUIRE(run_cli(cfg + " --seed 7 --out " + (dir / "seqs").string() +
                    " simulate -n 6") == 0);
    REQUIRE(fs::exists(dir / "seqs/events_00005.csv"));
    REQUIRE(fs::exists(dir / "seqs/events.meta.json"));

    // sidecars carry seed and version
    json meta;
    std::ifstream(dir / "seqs/events.meta.json") >> meta;
    CHECK(meta.at("seed") == 7);
    CHECK(meta.at("version") == std::string(version_string));

    REQUIRE(run_cli(" --horizon 30 censor --input " + (dir / "seqs/events_00000.csv").string() +
                    " --output " + (dir / "counts.csv").string() + " --intervals 10") == 0);
    const CensoredSeries counts = read_counts_csv((dir / "counts.csv").string());
    const EventSequence seq = read_events_csv((dir / "seqs/events_00000.csv").string(), 30.0);
    CHECK(counts.total() == double(seq.events.size()));

    REQUIRE(run_cli(cfg + " --seed 3 --out " + (dir / "fit1").string() + " fit --data-dir " +
                    (dir / "seqs").string() +
                    " --scenario F --model mbpp-closed --loss icll --endogenous"
                    " --intervals 15 --groups 2 --restarts 3") == 0);
    REQUIRE(fs::exists(dir / "fit1/fits.csv"));
    REQUIRE(fs::exists(dir / "fit1/fit.json"));

    // identical seed and config give byte-identical results
    REQUIRE(run_cli(cfg + " --seed 3 --out " + (dir / "fit2").string() + " fit --data-dir " +
                    (dir / "seqs").string() +
                    " --scenario F --model mbpp-closed --loss icll --endogenous"
                    " --intervals 15 --groups 2 --restarts 3") == 0);
    CHECK(slurp(dir / "fit1/fits.csv") == slurp(dir / "fit2/fits.csv"));

    // illegal combination: nonzero exit
    CHECK(run_cli(cfg + " fit --data-dir " + (dir / "seqs").string() +
                  " --scenario D --model hawkes --loss icll") != 0);
}

TEST_CASE("cli pipeline: daily fit, forecast, evaluate, report") {
    const fs::path dir = fresh_dir("daily");
    // synthetic daily item
    {
        std::ofstream obs(dir / "obs.csv"), exo(dir / "exo.csv");
        obs << "start,end,count\n";
        exo << "start,end,count\n";
        SplitMix64 rng(5);
        for (int d = 0; d < 30; ++d) {
            if (d < 20)
                obs << d << ',' << d + 1 << ',' << 6 + int(8 * rng.uniform()) << '\n';
            exo << d << ',' << d + 1 << ',' << 2 + int(5 * rng.uniform()) << '\n';
        }
    }
    REQUIRE(run_cli(" --out " + dir.string() + " fit --observed " + (dir / "obs.csv").string() +
                    " --exogenous-counts " + (dir / "exo.csv").string() +
                    " --model mbpp-closed --loss icll --restarts 3") == 0);
    REQUIRE(run_cli(" forecast --fit " + (dir / "fit.json").string() + " --observed " +
                    (dir / "obs.csv").string() + " --exogenous-counts " +
                    (dir / "exo.csv").string() + " --days 10 --output " +
                    (dir / "pred.csv").string()) == 0);
    const CensoredSeries pred = read_counts_csv((dir / "pred.csv").string(), false);
    REQUIRE(pred.counts.size() == 10);
    for (double v : pred.counts)
        REQUIRE(v >= 0.0);

    // corpus evaluation on two small items
    {
        std::ofstream p(dir / "p.csv"), t(dir / "t.csv");
        p << "item,day,value\n0,0,3\n0,1,4\n1,0,9\n1,1,8\n";
        t << "item,day,value\n0,0,3\n0,1,4\n1,0,10\n1,1,7\n";
    }
    REQUIRE(run_cli(" evaluate --pred " + (dir / "p.csv").string() + " --truth " +
                    (dir / "t.csv").string() + " --output " + (dir / "report.csv").string()) ==
            0);
    const std::string report = slurp(dir / "report.csv");
    CHECK(report.find("item,horizon_total_true,horizon_total_pred,ape,smape") == 0);

    // error-vs-D sweep is monotone decreasing
    std::ofstream(dir / "dcfg.json")
        << R"({"kernel": {"type": "exponential", "kappa": 0.6, "theta": 0.8},
               "exogenous": {"type": "dassios", "u0": 3.0, "kappa": 0.6, "theta": 0.8}})";
    REQUIRE(run_cli(" --config " + (dir / "dcfg.json").string() + " report --sweep-D " +
                    "10,20,40,80,160,320,640 --output " + (dir / "sweep.csv").string()) == 0);
    std::ifstream sf(dir / "sweep.csv");
    std::string line;
    std::getline(sf, line);
    double prev = 1e9;
    int rows = 0;
    while (std::getline(sf, line)) {
        const double err = std::stod(line.substr(line.find(',') + 1));
        REQUIRE(err <= prev * 1.02);
        prev = err;
        ++rows;
    }
    CHECK(rows == 7);
}
