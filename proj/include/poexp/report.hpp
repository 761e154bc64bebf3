#pragma once

#include <cmath>
#include <sstream>
#include <string>

#include <json.hpp>

#include "poexp/bounds.hpp"
#include "poexp/config.hpp"
#include "poexp/expansion.hpp"
#include "poexp/oracle.hpp"
#include "poexp/stein.hpp"

namespace poexp {

/// Runs the full pipeline for one problem: builds the sum model, tabulates
/// the test function, expands, and attaches bounds and the exact value as
/// requested by the report options.
inline ExpansionReport<double> runProblem(const ProblemConfig& config) {
    const std::vector<FinitePmf<double>> components = buildComponents(config);
    const SumModel<double> model = SumModel<double>::fromComponents(components);

    const double growth = config.function.growthExponent();
    const SteinContext<double> ctx =
        SteinContext<double>::forProblem(model.lambdaW(), config.order, growth,
                                         model.w().supportBound(), config.tailTol,
                                         config.gridBound);
    const TabulatedFunction<double> h = buildFunction(config.function, ctx.gridBound);

    ExpansionReport<double> report = expand(model, h, config.order, config.tailTol);
    report.diagnostics["tail_tol"] = config.tailTol;
    report.diagnostics["h_envelope_bound"] = h.envelope().bound;
    report.diagnostics["h_envelope_exponent"] = h.envelope().exponent;

    if (config.report.includeOracle) {
        const double oracle = oracle::exactExpectation(components, h);
        report.oracleValue = oracle;
        for (int k = 0; k <= config.order; ++k) {
            auto& rec = report.orders[static_cast<std::size_t>(k)];
            rec.eExact = oracle - rec.c;
            report.diagnostics["dual_path_residual_" + std::to_string(k)] =
                std::abs(rec.eViaRecursion - *rec.eExact);
        }
    }
    if (config.report.includeBounds) {
        const TabulatedFunction<double> fh = steinSolution(h, ctx);
        for (int k = 0; k <= config.order; ++k) {
            auto& rec = report.orders[static_cast<std::size_t>(k)];
            rec.bound = k == 0 ? e0Bound(model, h, growth, config.tailTol)
                               : recursiveEBound(model, h, k, growth, config.tailTol);
            const NormEstimate<double> norm = seminorm(fh, k, growth);
            report.diagnostics["seminorm_value_" + std::to_string(k)] = norm.value;
            report.diagnostics["seminorm_grid_certified_" + std::to_string(k)] =
                norm.exact ? 1.0 : 0.0;
        }
    }
    return report;
}

/// Machine-readable form. Field names are the stable wire format; key
/// order is alphabetical and the rendering is deterministic for a fixed
/// config.
inline nlohmann::json reportToJson(const ExpansionReport<double>& report) {
    nlohmann::json orders = nlohmann::json::array();
    for (int k = 0; k <= report.order; ++k) {
        const auto& rec = report.orders[static_cast<std::size_t>(k)];
        nlohmann::json row;
        row["k"] = k;
        row["C"] = rec.c;
        row["e_via_eq11"] = rec.eViaRecursion;
        if (rec.eExact) row["e_exact"] = *rec.eExact;
        if (rec.bound) row["bound"] = *rec.bound;
        orders.push_back(row);
    }
    nlohmann::json out;
    out["orders"] = orders;
    if (report.oracleValue) out["oracle"] = *report.oracleValue;
    nlohmann::json provenance;
    for (const auto& [key, value] : report.diagnostics) provenance[key] = value;
    out["provenance"] = provenance;
    return out;
}

/// Human-readable table: one row per expansion order.
inline std::string reportToText(const ExpansionReport<double>& report) {
    std::ostringstream os;
    os.precision(12);
    os << "k  C_k  e_k  bound_k  bound/|e|\n";
    for (int k = 0; k <= report.order; ++k) {
        const auto& rec = report.orders[static_cast<std::size_t>(k)];
        const double e = rec.eExact ? *rec.eExact : rec.eViaRecursion;
        os << k << "  " << rec.c << "  " << e << "  ";
        if (rec.bound) {
            os << *rec.bound << "  ";
            if (e != 0.0) {
                os << *rec.bound / std::abs(e);
            } else {
                os << "inf";
            }
        } else {
            os << "-  -";
        }
        os << "\n";
    }
    if (report.oracleValue) os << "exact E[h(W)] = " << *report.oracleValue << "\n";
    return os.str();
}

} // namespace poexp
