// Command-line front end: simulation, censoring, fitting, forecasting and
// evaluation of self-exciting event data, wired for reproducible batch runs.
// Every subcommand reads an optional JSON config (--config); explicit flags
// win over config values, and every output file gets a .meta.json sidecar
// echoing the effective config and seed.

#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <icpp/experiments.hpp>
#include <icpp/forecast.hpp>
#include <icpp/io.hpp>

namespace fs = std::filesystem;
using icpp::json;

namespace {

struct CommonOpts {
    std::string config_path;
    std::string out_dir = ".";
    std::uint64_t seed = 1;
    double horizon = 30.0;
};

json load_config(const std::string& path) {
    if (path.empty())
        return json::object();
    std::ifstream f(path);
    if (!f)
        throw std::runtime_error("cannot read config: " + path);
    json j;
    f >> j;
    return j;
}

// config value unless the flag was given on the command line
template <class T>
void from_config(const CLI::App& app, const json& cfg, const std::string& key, T& value) {
    const std::string flag = "--" + key;
    if (cfg.contains(key) && app.count(flag) == 0)
        value = cfg.at(key).get<T>();
}

icpp::Exogenous exogenous_from(const json& cfg) {
    if (!cfg.contains("exogenous"))
        throw std::runtime_error("config needs an \"exogenous\" object");
    return icpp::exogenous_from_json(cfg.at("exogenous"));
}

icpp::Kernel kernel_from(const json& cfg) {
    if (!cfg.contains("kernel"))
        throw std::runtime_error("config needs a \"kernel\" object");
    return icpp::kernel_from_json(cfg.at("kernel"));
}

std::string seq_path(const std::string& dir, std::size_t i) {
    std::ostringstream ss;
    ss << dir << "/events_" << std::setw(5) << std::setfill('0') << i << ".csv";
    return ss.str();
}

std::vector<std::size_t> parse_size_list(const std::string& csv) {
    std::vector<std::size_t> out;
    std::stringstream ss(csv);
    std::string tok;
    while (std::getline(ss, tok, ','))
        out.push_back(std::stoul(tok));
    return out;
}

int cmd_simulate(const CommonOpts& c, const json& cfg, std::size_t n) {
    const icpp::Kernel k = kernel_from(cfg);
    const icpp::Exogenous s = exogenous_from(cfg);
    fs::create_directories(c.out_dir);
    const auto batch = icpp::sample_batch(k, s, c.horizon, n, c.seed);
    for (std::size_t i = 0; i < batch.size(); ++i)
        icpp::write_events_csv(seq_path(c.out_dir, i), batch[i]);
    json meta = cfg;
    meta["n"] = n;
    meta["horizon"] = c.horizon;
    icpp::write_sidecar(c.out_dir + "/events", meta, c.seed);
    std::cout << "wrote " << n << " sequences to " << c.out_dir << "\n";
    return 0;
}

int cmd_censor(const CommonOpts& c, const std::string& input, std::size_t intervals,
               const std::string& label, const std::string& output) {
    const icpp::EventSequence seq = icpp::read_events_csv(input, c.horizon);
    std::optional<icpp::EventLabel> filter;
    if (label == "immigrant")
        filter = icpp::EventLabel::immigrant;
    else if (label == "offspring")
        filter = icpp::EventLabel::offspring;
    else if (!label.empty())
        throw std::runtime_error("unknown label filter: " + label);
    const auto counts =
        icpp::censor(seq, icpp::equidistant_boundaries(c.horizon, intervals), filter);
    icpp::write_counts_csv(output, counts);
    icpp::write_sidecar(output, json{{"input", input}, {"intervals", intervals},
                                     {"label", label}, {"horizon", c.horizon}},
                        c.seed);
    std::cout << "wrote " << output << "\n";
    return 0;
}

struct FitOpts {
    std::string data_dir;
    std::string observed_csv; // daily mode
    std::string exo_csv;      // daily mode
    std::string scenario = "A";
    std::string model = "mbpp-closed";
    std::string kernel = "exponential";
    std::string loss = "ppll";
    bool endogenous = false;
    std::size_t intervals = 15;
    std::size_t intervals_q = 0;
    std::size_t grid_points = 0;
    std::size_t restarts = 10;
    std::size_t groups = 1;
};

// daily popularity model: endogenous counts + known exogenous counts per day
int cmd_fit_daily(const CommonOpts& c, const json& cfg, const FitOpts& o) {
    const icpp::CensoredSeries observed = icpp::read_counts_csv(o.observed_csv);
    const icpp::CensoredSeries exo = icpp::read_counts_csv(o.exo_csv);
    icpp::FitConfig fc;
    fc.restarts = o.restarts;
    fc.seed = c.seed;
    fc.grid_points = o.grid_points;
    const icpp::FitResult r =
        icpp::fit_daily(observed.counts, exo.counts, icpp::model_from_string(o.model),
                        icpp::kernel_from_string(o.kernel), icpp::loss_from_string(o.loss), fc);
    fs::create_directories(c.out_dir);
    icpp::write_fit_json(c.out_dir + "/fit.json", r);
    json meta = cfg;
    meta["observed"] = o.observed_csv;
    meta["exogenous_counts"] = o.exo_csv;
    meta["model"] = o.model;
    meta["loss"] = o.loss;
    icpp::write_sidecar(c.out_dir + "/fit.json", meta, c.seed);
    std::cout << "daily fit: loss=" << r.loss << (r.converged ? "" : " (not converged)")
              << "\n";
    return 0;
}

int cmd_fit(const CommonOpts& c, const json& cfg, const FitOpts& o) {
    const icpp::Scenario sc = icpp::scenario_from_string(o.scenario);
    std::optional<icpp::Exogenous> known;
    if (!icpp::scenario_separable(sc))
        known = exogenous_from(cfg);

    std::vector<icpp::EventSequence> seqs;
    for (std::size_t i = 0;; ++i) {
        const std::string p = seq_path(o.data_dir, i);
        if (!fs::exists(p))
            break;
        seqs.push_back(icpp::read_events_csv(p, c.horizon));
    }
    if (seqs.empty())
        throw std::runtime_error("no event files found under " + o.data_dir);

    const auto O = icpp::equidistant_boundaries(c.horizon, o.intervals);
    const auto Q = icpp::equidistant_boundaries(
        c.horizon, o.intervals_q ? o.intervals_q : o.intervals);

    icpp::FitConfig fc;
    fc.restarts = o.restarts;
    fc.seed = c.seed;
    fc.grid_points = o.grid_points;

    const std::size_t per_group = seqs.size() / o.groups;
    if (per_group == 0)
        throw std::runtime_error("more groups than sequences");
    std::vector<icpp::FitResult> results;
    for (std::size_t g = 0; g < o.groups; ++g) {
        std::vector<icpp::ScenarioData> group;
        for (std::size_t i = g * per_group; i < (g + 1) * per_group; ++i)
            group.push_back(icpp::make_scenario(seqs[i], sc, O, Q, known));
        icpp::FitConfig gfc = fc;
        gfc.seed = icpp::substream_seed(c.seed, 0xf17 + g);
        results.push_back(icpp::fit_group(group, icpp::model_from_string(o.model),
                                          icpp::kernel_from_string(o.kernel),
                                          {icpp::loss_from_string(o.loss), o.endogenous},
                                          gfc));
    }

    fs::create_directories(c.out_dir);
    icpp::write_fit_json(c.out_dir + "/fit.json", results.front());
    icpp::write_batch_csv(c.out_dir + "/fits.csv", results);
    json meta = cfg;
    meta["scenario"] = o.scenario;
    meta["model"] = o.model;
    meta["loss"] = o.loss;
    meta["endogenous"] = o.endogenous;
    meta["intervals"] = o.intervals;
    meta["groups"] = o.groups;
    icpp::write_sidecar(c.out_dir + "/fits.csv", meta, c.seed);
    for (const auto& r : results)
        std::cout << r.scenario << "," << r.model << "," << r.loss_name << ": kappa="
                  << r.params[0] << " theta=" << r.params[r.params.size() > 2 ? 2 : 1]
                  << " loss=" << r.loss << (r.converged ? "" : " (not converged)") << "\n";
    return 0;
}

int cmd_forecast(const CommonOpts& c, const json& cfg, const std::string& fit_json,
                 const std::string& observed_csv, const std::string& exo_csv,
                 std::size_t horizon, const std::string& output) {
    std::ifstream f(fit_json);
    if (!f)
        throw std::runtime_error("cannot read fit result: " + fit_json);
    json fit;
    f >> fit;
    const json& p = fit.at("params");
    const icpp::Kernel k = fit.at("kernel") == "powerlaw"
                               ? icpp::Kernel(icpp::PowerLawKernel{p.at("kappa"), p.at("c"),
                                                                   p.at("theta")})
                               : icpp::Kernel(icpp::ExpKernel{p.at("kappa"), p.at("theta")});
    const double gamma = p.value("gamma", 0.0);
    const double nu = p.value("nu", 0.0);
    const double mu = p.value("mu", 0.0);

    const icpp::CensoredSeries observed = icpp::read_counts_csv(observed_csv);
    const icpp::CensoredSeries exo = icpp::read_counts_csv(exo_csv);
    icpp::PiecewiseConstant base;
    base.boundaries = exo.boundaries;
    base.rates.resize(exo.counts.size());
    for (std::size_t i = 0; i < exo.counts.size(); ++i)
        base.rates[i] = exo.counts[i] / (exo.boundaries[i + 1] - exo.boundaries[i]);

    const auto pred = icpp::forecast_daily(k, icpp::Augmented{gamma, nu, mu, base},
                                           observed.counts, horizon);
    icpp::CensoredSeries out;
    out.boundaries.resize(horizon + 1);
    for (std::size_t i = 0; i <= horizon; ++i)
        out.boundaries[i] = double(observed.counts.size() + i);
    out.counts = pred;
    icpp::write_counts_csv(output, out);
    json meta = cfg;
    meta["fit"] = fit_json;
    meta["observed"] = observed_csv;
    meta["exogenous_counts"] = exo_csv;
    meta["horizon"] = horizon;
    icpp::write_sidecar(output, meta, c.seed);
    std::cout << "wrote " << output << "\n";
    return 0;
}

// per-day corpus files use the item,day,value schema
std::vector<std::vector<double>> read_daily_csv(const std::string& path) {
    std::ifstream f(path);
    if (!f)
        throw std::runtime_error("cannot read: " + path);
    std::string line;
    std::getline(f, line);
    std::vector<std::vector<double>> out;
    while (std::getline(f, line)) {
        if (line.empty())
            continue;
        std::stringstream ss(line);
        std::string item, day, value;
        std::getline(ss, item, ',');
        std::getline(ss, day, ',');
        std::getline(ss, value, ',');
        const std::size_t i = std::stoul(item);
        if (out.size() <= i)
            out.resize(i + 1);
        out[i].push_back(std::stod(value));
    }
    return out;
}

int cmd_evaluate(const CommonOpts& c, const std::string& pred_csv,
                 const std::string& truth_csv, const std::string& output) {
    const auto pred = read_daily_csv(pred_csv);
    const auto truth = read_daily_csv(truth_csv);
    const icpp::ForecastReport r = icpp::build_report(pred, truth);
    icpp::write_report_csv(output, r);
    icpp::write_sidecar(output, json{{"pred", pred_csv}, {"truth", truth_csv}}, c.seed);
    std::cout << "mean APE " << r.mean_ape << ", mean sMAPE " << r.mean_smape << "\n";
    return 0;
}

int cmd_report_sweep(const CommonOpts& c, const json& cfg, const std::string& sweep,
                     const std::string& output) {
    const icpp::MeanModel model{kernel_from(cfg), exogenous_from(cfg)};
    const auto points = icpp::sweep_grid_error(model, c.horizon, parse_size_list(sweep));
    std::ofstream f(output);
    f.precision(12);
    f << "grid_points,max_rel_error\n";
    for (const auto& p : points)
        f << p.grid_points << ',' << p.max_rel_error << '\n';
    icpp::write_sidecar(output, cfg, c.seed);
    std::cout << "wrote " << output << "\n";
    return 0;
}

int cmd_report_recovery(const CommonOpts& c, const json& cfg, const FitOpts& o,
                        std::size_t n_sequences, const std::string& output) {
    icpp::RecoveryConfig rc{kernel_from(cfg),
                            exogenous_from(cfg),
                            c.horizon,
                            n_sequences,
                            o.groups,
                            icpp::scenario_from_string(o.scenario),
                            icpp::model_from_string(o.model),
                            icpp::kernel_from_string(o.kernel),
                            {icpp::loss_from_string(o.loss), o.endogenous}};
    rc.intervals = o.intervals;
    rc.intervals_q = o.intervals_q;
    rc.fit.restarts = o.restarts;
    rc.fit.grid_points = o.grid_points;
    rc.seed = c.seed;
    const icpp::RecoveryResult res = icpp::run_recovery(rc);

    std::ofstream f(output);
    f.precision(10);
    f << "scenario,model,loss,param,mean,std\n";
    const auto& names = res.groups.front().param_names;
    for (std::size_t p = 0; p < names.size(); ++p)
        f << o.scenario << ',' << o.model << ',' << o.loss << ',' << names[p] << ','
          << res.mean(p) << ',' << res.stddev(p) << '\n';
    icpp::write_batch_csv(output + ".groups.csv", res.groups);
    json meta = cfg;
    meta["n_sequences"] = n_sequences;
    meta["scenario"] = o.scenario;
    icpp::write_sidecar(output, meta, c.seed);
    std::cout << "wrote " << output << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"interval-censored self-exciting point process toolkit"};
    app.require_subcommand(1);

    CommonOpts c;
    app.add_option("--config", c.config_path, "JSON config; flags override its values");
    app.add_option("--seed", c.seed, "random seed recorded in all outputs");
    app.add_option("--out", c.out_dir, "output directory");
    app.add_option("--horizon", c.horizon, "observation window length T");

    auto* sim = app.add_subcommand("simulate", "sample event sequences");
    std::size_t n_sequences = 100;
    sim->add_option("-n,--sequences", n_sequences, "number of sequences");

    auto* cen = app.add_subcommand("censor", "turn event times into interval counts");
    std::string input, output = "counts.csv", label;
    std::size_t intervals_flag = 15;
    cen->add_option("--input", input, "events CSV (time,label)")->required();
    cen->add_option("--output", output, "counts CSV (start,end,count)");
    cen->add_option("--intervals", intervals_flag, "number of equal observation intervals");
    cen->add_option("--label", label, "keep only immigrant or offspring events");

    FitOpts fo;
    auto* fit = app.add_subcommand("fit", "estimate kernel parameters from scenario data");
    fit->add_option("--data-dir", fo.data_dir, "directory of events_*.csv files");
    fit->add_option("--observed", fo.observed_csv,
                    "daily mode: observed endogenous counts CSV");
    fit->add_option("--exogenous-counts", fo.exo_csv,
                    "daily mode: known exogenous counts CSV");
    fit->add_option("--scenario", fo.scenario, "observation scenario A..F");
    fit->add_option("--model", fo.model, "hawkes | mbpp-closed | mbpp-approx");
    fit->add_option("--kernel", fo.kernel, "exponential | powerlaw");
    fit->add_option("--loss", fo.loss, "ppll | icll | sse | hip");
    fit->add_flag("--endogenous", fo.endogenous, "use the endogenous loss variant");
    fit->add_option("--intervals", fo.intervals, "observation intervals for censored streams");
    fit->add_option("--intervals-q", fo.intervals_q, "immigrant censoring intervals");
    fit->add_option("--grid-points", fo.grid_points, "approximation points D");
    fit->add_option("--restarts", fo.restarts, "optimizer restarts");
    fit->add_option("--groups", fo.groups, "jointly fitted sequence groups");

    auto* fc = app.add_subcommand("forecast", "predict future interval counts");
    std::string fit_json, observed_csv, exo_csv, pred_out = "forecast.csv";
    std::size_t horizon_days = 30;
    fc->add_option("--fit", fit_json, "fit result JSON")->required();
    fc->add_option("--observed", observed_csv, "observed daily counts CSV")->required();
    fc->add_option("--exogenous-counts", exo_csv, "known daily exogenous counts CSV")
        ->required();
    fc->add_option("--days", horizon_days, "days to forecast");
    fc->add_option("--output", pred_out, "predictions CSV");

    auto* ev = app.add_subcommand("evaluate", "score predictions against the truth");
    std::string pred_csv, truth_csv, report_out = "report.csv";
    ev->add_option("--pred", pred_csv, "per-day predictions CSV (item,day,value)")->required();
    ev->add_option("--truth", truth_csv, "per-day true counts CSV (item,day,value)")
        ->required();
    ev->add_option("--output", report_out, "report CSV");

    auto* rep = app.add_subcommand("report", "aggregate experiment tables");
    std::string sweep_d, report_file = "report_table.csv";
    std::size_t rep_sequences = 200;
    rep->add_option("--sweep-D", sweep_d, "comma-separated grid sizes for the error sweep");
    rep->add_option("--sequences", rep_sequences, "sequences for the recovery table");
    rep->add_option("--scenario", fo.scenario, "observation scenario A..F");
    rep->add_option("--model", fo.model, "hawkes | mbpp-closed | mbpp-approx");
    rep->add_option("--kernel", fo.kernel, "exponential | powerlaw");
    rep->add_option("--loss", fo.loss, "ppll | icll | sse | hip");
    rep->add_flag("--endogenous", fo.endogenous, "use the endogenous loss variant");
    rep->add_option("--intervals", fo.intervals, "observation intervals");
    rep->add_option("--grid-points", fo.grid_points, "approximation points D");
    rep->add_option("--restarts", fo.restarts, "optimizer restarts");
    rep->add_option("--groups", fo.groups, "number of groups");
    rep->add_option("--output", report_file, "output CSV");

    CLI11_PARSE(app, argc, argv);

    try {
        const json cfg = load_config(c.config_path);
        from_config(app, cfg, "seed", c.seed);
        from_config(app, cfg, "horizon", c.horizon);
        from_config(app, cfg, "out", c.out_dir);

        if (sim->parsed())
            return cmd_simulate(c, cfg, n_sequences);
        if (cen->parsed())
            return cmd_censor(c, input, intervals_flag, label, output);
        if (fit->parsed()) {
            if (!fo.observed_csv.empty())
                return cmd_fit_daily(c, cfg, fo);
            if (fo.data_dir.empty())
                throw std::runtime_error("fit needs --data-dir, or --observed for daily mode");
            return cmd_fit(c, cfg, fo);
        }
        if (fc->parsed())
            return cmd_forecast(c, cfg, fit_json, observed_csv, exo_csv, horizon_days,
                                pred_out);
        if (ev->parsed())
            return cmd_evaluate(c, pred_csv, truth_csv, report_out);
        if (rep->parsed()) {
            if (!sweep_d.empty())
                return cmd_report_sweep(c, cfg, sweep_d, report_file);
            return cmd_report_recovery(c, cfg, fo, rep_sequences, report_file);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
