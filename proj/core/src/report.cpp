#include "ratefix/report.hpp"

#include <cmath>
#include <sstream>

#include "json.hpp"
#include "ratefix/bailey.hpp"
#include "ratefix/convergence.hpp"
#include "ratefix/errors.hpp"
#include "ratefix/io.hpp"
#include "ratefix/leslie_gower.hpp"

namespace ratefix {

namespace {

using nlohmann::ordered_json;

constexpr const char* kSchema = "ratefix-report/1";
constexpr double kAgreementTolerance = 1e-8;    // multi-start limits
constexpr double kLgAgreementTolerance = 1e-7;  // iteration vs linear solve
constexpr std::size_t kFallbackStarts = 10;

ordered_json json_blocks(const std::vector<std::vector<double>>& blocks) {
    ordered_json arr = ordered_json::array();
    for (const auto& b : blocks) arr.push_back(b);
    return arr;
}

ordered_json json_iteration(const IterationTrace& trace) {
    ordered_json it;
    it["converged"] = trace.converged;
    it["iterations"] = trace.iterations_used;
    it["final_residual"] = trace.residuals.empty() ? 0.0 : trace.residuals.back();
    it["residual_history"] = trace.residuals;
    return it;
}

ordered_json json_problem(const RatingProblem& problem) {
    ordered_json p;
    p["axes"] = problem.losses().axis_names();
    p["dims"] = problem.dims();
    p["cells"] = problem.losses().size();
    p["total_loss"] = problem.losses().total();
    p["total_exposure"] = problem.exposures().total();
    p["losses"] = problem.losses().values();
    p["exposures"] = problem.exposures().values();
    return p;
}

ordered_json json_certificate_section(const RatingProblem& problem,
                                      const IterationSettings& settings, std::uint64_t seed) {
    ordered_json section;
    try {
        ConvergenceCertificate cert = certify(problem);
        section["supported"] = true;
        section["rho_inf"] = cert.rho_inf;
        section["rho_1"] = cert.rho_1;
        section["r_inf"] = cert.r_inf;
        section["r_1"] = cert.r_1;
        section["rho"] = cert.rho;
        section["r"] = cert.r;
        section["verdict"] = cert.certified() ? "certified_unique" : "uncertified";
        section["box"] = {{"lower", json_blocks(cert.box.lower)},
                          {"upper", json_blocks(cert.box.upper)}};
    } catch (const UnsupportedDimension&) {
        MultiStartCheck check =
            multi_start_check(problem, settings, kFallbackStarts, seed, kAgreementTolerance);
        section["supported"] = false;
        section["reason"] = "closed-form bounds cover exactly three factors";
        section["empirical"] = {{"starts", check.starts},
                                {"all_converged", check.all_converged},
                                {"max_pair_distance", check.max_pair_distance},
                                {"tolerance", check.agreement_tolerance},
                                {"agree", check.agree}};
    } catch (const ZeroExposure& e) {
        section["supported"] = false;
        section["reason"] = "certificates need strictly positive exposures";
        section["warning"] = e.what();
    }
    return section;
}

bool certificate_ok(const ordered_json& section) {
    if (section.value("supported", false)) return section["verdict"] == "certified_unique";
    if (section.contains("empirical")) return section["empirical"]["agree"].get<bool>();
    return false;
}

std::string render(const ordered_json& doc, OutputFormat format);

RunResult run_rate(const RunConfig& config) {
    RatingProblem problem =
        ingest_rating_csv(config.input_path, config.plr, config.strict, config.base_cell);
    IterationSettings settings = settings_for(config);

    IterationTrace trace = iterate(problem, FactorState::ones(problem.dims()), settings);
    const FactorState& factors = trace.last();
    double base_rate = indicated_base_rate(problem, factors);
    RiskTensor rates = assemble_rates(base_rate, factors);

    ordered_json doc;
    doc["schema"] = kSchema;
    doc["command"] = "rate";
    doc["config"] = {{"plr", config.plr},
                     {"tolerance", settings.tolerance},
                     {"max_iters", settings.max_iters},
                     {"residual_norm", settings.norm == ResidualNorm::One ? "one" : "infinity"},
                     {"strict", config.strict},
                     {"seed", config.seed}};
    doc["problem"] = json_problem(problem);
    doc["iteration"] = json_iteration(trace);
    doc["factors"] = {{"axes", problem.losses().axis_names()},
                      {"blocks", json_blocks(factors.blocks)}};
    doc["base_rate"] = base_rate;
    doc["rates"] = rates.values();
    doc["certificate"] = json_certificate_section(problem, settings, config.seed);

    return {trace.converged ? 0 : 2, render(doc, config.format)};
}

RunResult run_certify(const RunConfig& config) {
    RatingProblem problem =
        ingest_rating_csv(config.input_path, config.plr, config.strict, config.base_cell);
    IterationSettings settings = settings_for(config);

    ordered_json doc;
    doc["schema"] = kSchema;
    doc["command"] = "certify";
    doc["config"] = {{"tolerance", settings.tolerance},
                     {"max_iters", settings.max_iters},
                     {"residual_norm", settings.norm == ResidualNorm::One ? "one" : "infinity"},
                     {"strict", config.strict},
                     {"seed", config.seed}};
    doc["problem"] = json_problem(problem);
    doc["certificate"] = json_certificate_section(problem, settings, config.seed);

    return {certificate_ok(doc["certificate"]) ? 0 : 2, render(doc, config.format)};
}

RunResult run_lg(const RunConfig& config) {
    LGModel model = ingest_lg_json(config.input_path);
    IterationSettings settings = settings_for(config);

    LGDiagnostics diag = diagnose(model, config.shrink);

    ordered_json doc;
    doc["schema"] = kSchema;
    doc["command"] = "lg";
    doc["config"] = {{"tolerance", settings.tolerance},
                     {"max_iters", settings.max_iters},
                     {"residual_norm", settings.norm == ResidualNorm::One ? "one" : "infinity"},
                     {"shrink", config.shrink},
                     {"seed", config.seed}};
    doc["model"] = {{"species", model.species()}, {"b", model.b()}, {"C", model.c().data}};

    ordered_json jdiag;
    jdiag["growth_ok"] = diag.growth_ok;
    jdiag["rank_consistent"] = diag.rank_consistent;
    jdiag["invertible"] = diag.invertible;
    jdiag["weak_competition"] = diag.weak_competition;
    jdiag["weak_slack"] = diag.weak_slack;
    jdiag["carrying_capacities"] = diag.carrying_capacities;
    if (diag.box)
        jdiag["box"] = {{"lower", diag.box->lower}, {"upper", diag.box->upper}};
    else
        jdiag["box"] = nullptr;
    doc["diagnostics"] = jdiag;

    ordered_json jlin;
    std::optional<LinearEquilibrium> linear;
    try {
        linear = solve_linear(model);
        jlin["exists"] = true;
        jlin["x"] = linear->x;
        jlin["positive"] = linear->positive;
    } catch (const SingularMatrix& e) {
        jlin["exists"] = false;
        jlin["reason"] = e.what();
        jlin["rank_consistent"] = e.rank_consistent;
    }
    doc["linear_solution"] = jlin;

    std::vector<double> x0(model.species(), 1.0);
    IterationTrace trace = iterate_lg(model, x0, settings);
    ordered_json jit = json_iteration(trace);
    jit["limit"] = trace.last().blocks[0];
    doc["iteration"] = jit;

    ordered_json jagree;
    if (linear && trace.converged) {
        double dist = 0.0;
        for (std::size_t i = 0; i < model.species(); ++i)
            dist = std::max(dist, std::fabs(linear->x[i] - trace.last().blocks[0][i]));
        jagree["comparable"] = true;
        jagree["max_abs_difference"] = dist;
        jagree["tolerance"] = kLgAgreementTolerance;
        jagree["agree"] = dist <= kLgAgreementTolerance;
    } else {
        jagree["comparable"] = false;
    }
    doc["agreement"] = jagree;

    return {trace.converged ? 0 : 2, render(doc, config.format)};
}

RunResult run_bailey(const RunConfig& config) {
    RatingData data = parse_rating_csv(config.input_path);
    if (config.base_cell) {
        if (config.base_cell->size() != data.losses.rank())
            throw InvalidArgument("base cell must list one index per factor");
        for (std::size_t a = 0; a < config.base_cell->size(); ++a) {
            data.losses.swap_slice_to_front(a, (*config.base_cell)[a]);
            data.exposures.swap_slice_to_front(a, (*config.base_cell)[a]);
        }
    }
    BaileyProblem bailey = to_bailey_problem(data);
    IterationSettings settings = settings_for(config);

    std::vector<double> x0(bailey.rows(), 1.0), y0(bailey.cols(), 1.0);
    IterationTrace trace = bailey_iterate(bailey, x0, y0, settings);
    auto [bx, by] = normalize_bailey(trace.last().blocks[0], trace.last().blocks[1]);
    double base_cost = by[0];
    std::vector<double> by_rel(by.size());
    for (std::size_t j = 0; j < by.size(); ++j) by_rel[j] = by[j] / by[0];
    by_rel[0] = 1.0;
    auto [row_bias, col_bias] = bailey_residuals(bailey, trace.last().blocks[0],
                                                 trace.last().blocks[1]);
    double max_bias = 0.0;
    for (double v : row_bias) max_bias = std::max(max_bias, std::fabs(v));
    for (double v : col_bias) max_bias = std::max(max_bias, std::fabs(v));

    // Loss-ratio fit of the same experience for the side-by-side view.
    RatingProblem problem(data.losses, data.exposures, 1.0, config.strict);
    IterationTrace lr_trace = iterate(problem, FactorState::ones(problem.dims()), settings);
    const FactorState& lr = lr_trace.last();

    double dist = 0.0;
    for (std::size_t i = 0; i < bx.size(); ++i)
        dist = std::max(dist, std::fabs(bx[i] - lr.blocks[0][i]));
    for (std::size_t j = 0; j < by_rel.size(); ++j)
        dist = std::max(dist, std::fabs(by_rel[j] - lr.blocks[1][j]));

    ordered_json doc;
    doc["schema"] = kSchema;
    doc["command"] = "bailey";
    doc["config"] = {{"tolerance", settings.tolerance},
                     {"max_iters", settings.max_iters},
                     {"strict", config.strict},
                     {"seed", config.seed}};
    std::vector<double> costs(bailey.rows() * bailey.cols());
    for (std::size_t i = 0; i < bailey.rows(); ++i)
        for (std::size_t j = 0; j < bailey.cols(); ++j)
            costs[i * bailey.cols() + j] = bailey.r(i, j);
    doc["problem"] = {{"axes", data.losses.axis_names()},
                      {"rows", bailey.rows()},
                      {"cols", bailey.cols()},
                      {"losses", data.losses.values()},
                      {"exposures", data.exposures.values()},
                      {"loss_costs", costs}};
    doc["iteration"] = json_iteration(trace);
    doc["bailey"] = {{"x", bx},
                     {"y", by_rel},
                     {"base_cost", base_cost},
                     {"max_abs_bias", max_bias}};
    doc["loss_ratio"] = {{"converged", lr_trace.converged},
                         {"blocks", json_blocks(lr.blocks)},
                         {"base_cost", indicated_base_rate(problem, lr)}};
    doc["comparison"] = {{"max_abs_difference", dist}};

    return {trace.converged && lr_trace.converged ? 0 : 2, render(doc, config.format)};
}

// ---------------------------------------------------------------------------
// Text rendering: a readable digest of the same JSON document.

void text_vector(std::ostream& os, const ordered_json& arr) {
    os << "[";
    bool first = true;
    for (const auto& v : arr) {
        if (!first) os << ", ";
        first = false;
        os << v.dump();
    }
    os << "]";
}

void text_section(std::ostream& os, const std::string& name, const ordered_json& obj,
                  int indent = 2) {
    os << name << "\n";
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        os << std::string(indent, ' ') << it.key() << ": ";
        if (it.value().is_array())
            text_vector(os, it.value());
        else if (it.value().is_object()) {
            os << "\n";
            for (auto inner = it.value().begin(); inner != it.value().end(); ++inner) {
                os << std::string(indent + 2, ' ') << inner.key() << ": ";
                if (inner.value().is_array())
                    text_vector(os, inner.value());
                else
                    os << inner.value().dump();
                os << "\n";
            }
            continue;
        } else
            os << it.value().dump();
        os << "\n";
    }
}

std::string render(const ordered_json& doc, OutputFormat format) {
    if (format == OutputFormat::Json) return doc.dump(2) + "\n";
    std::ostringstream os;
    os << "ratefix " << doc["command"].get<std::string>() << " report\n";
    for (auto it = doc.begin(); it != doc.end(); ++it) {
        if (it.key() == "schema" || it.key() == "command") continue;
        const ordered_json& v = it.value();
        if (v.is_object())
            text_section(os, it.key(), v);
        else if (v.is_array()) {
            os << it.key() << ": ";
            text_vector(os, v);
            os << "\n";
        } else
            os << it.key() << ": " << v.dump() << "\n";
    }
    return os.str();
}

}  // namespace

IterationSettings settings_for(const RunConfig& config) {
    IterationSettings settings = config.command == Command::Lg
                                     ? IterationSettings::lg_defaults()
                                     : IterationSettings::rating_defaults();
    if (config.tolerance) settings.tolerance = *config.tolerance;
    if (config.max_iters) settings.max_iters = *config.max_iters;
    return settings;
}

const char* command_name(Command c) {
    switch (c) {
        case Command::Rate: return "rate";
        case Command::Certify: return "certify";
        case Command::Lg: return "lg";
        case Command::Bailey: return "bailey";
    }
    return "?";
}

RunResult run(const RunConfig& config) {
    RunResult result;
    switch (config.command) {
        case Command::Rate: result = run_rate(config); break;
        case Command::Certify: result = run_certify(config); break;
        case Command::Lg: result = run_lg(config); break;
        case Command::Bailey: result = run_bailey(config); break;
    }
    if (!config.out_path.empty()) write_file_atomic(config.out_path, result.report);
    return result;
}

}  // namespace ratefix
