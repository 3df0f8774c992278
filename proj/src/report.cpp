#include "motifcut/report.hpp"

#include <fstream>
#include <ostream>
#include <sstream>

#include <json.hpp>

namespace motifcut {

namespace {

using nlohmann::json;

json params_to_json(const MechanismParams& p) {
    return json{{"epsilon", p.epsilon},
                {"delta", p.delta},
                {"beta", p.beta},
                {"eps1", p.eps1},
                {"eps2", p.eps2},
                {"eps3", p.eps3},
                {"eps4", p.eps4},
                {"restarts", p.restarts},
                {"steps", p.steps},
                {"lambda", p.lambda},
                {"eta", p.eta},
                {"radius", p.radius},
                {"grad_bound", p.grad_bound},
                {"constants",
                 json{{"c_t", p.constants.c_t},
                      {"c_lambda", p.constants.c_lambda},
                      {"c_eta", p.constants.c_eta},
                      {"c_deg_w", p.constants.c_deg_w},
                      {"c_deg_l3", p.constants.c_deg_l3}}}};
}

MechanismParams params_from_json(const json& j) {
    MechanismParams p;
    j.at("epsilon").get_to(p.epsilon);
    j.at("delta").get_to(p.delta);
    j.at("beta").get_to(p.beta);
    j.at("eps1").get_to(p.eps1);
    j.at("eps2").get_to(p.eps2);
    j.at("eps3").get_to(p.eps3);
    j.at("eps4").get_to(p.eps4);
    j.at("restarts").get_to(p.restarts);
    j.at("steps").get_to(p.steps);
    j.at("lambda").get_to(p.lambda);
    j.at("eta").get_to(p.eta);
    j.at("radius").get_to(p.radius);
    j.at("grad_bound").get_to(p.grad_bound);
    const json& c = j.at("constants");
    c.at("c_t").get_to(p.constants.c_t);
    c.at("c_lambda").get_to(p.constants.c_lambda);
    c.at("c_eta").get_to(p.constants.c_eta);
    c.at("c_deg_w").get_to(p.constants.c_deg_w);
    c.at("c_deg_l3").get_to(p.constants.c_deg_l3);
    return p;
}

}  // namespace

nlohmann::json report_to_json(const MechanismReport& r) {
    json restarts = json::array();
    for (const auto& rs : r.restarts) {
        json steps = json::array();
        for (const auto& ss : rs.steps)
            steps.push_back(json{{"t", ss.t},
                                 {"sdp_value", ss.sdp_value},
                                 {"quad_value", ss.quad_value},
                                 {"f_proxy", ss.f_proxy},
                                 {"solver_steps", ss.solver_steps}});
        restarts.push_back(json{{"index", rs.index},
                                {"candidate_value", rs.candidate_value},
                                {"seconds", rs.seconds},
                                {"steps", std::move(steps)}});
    }
    return json{{"seed", r.seed},
                {"n", r.n},
                {"params", params_to_json(r.params)},
                {"degenerate", r.degenerate},
                {"degenerate_reason", r.degenerate_reason},
                {"w_total", r.w_total},
                {"l3_tilde", r.l3_tilde},
                {"u_triangle", r.u_triangle},
                {"u_lambda", r.u_lambda},
                {"caps_clamped", r.caps_clamped},
                {"caps", r.caps},
                {"restarts", std::move(restarts)},
                {"chosen_restart", r.chosen_restart},
                {"final_weights", r.final_weights},
                {"total_seconds", r.total_seconds}};
}

MechanismReport report_from_json(const nlohmann::json& j) {
    MechanismReport r;
    j.at("seed").get_to(r.seed);
    j.at("n").get_to(r.n);
    r.params = params_from_json(j.at("params"));
    j.at("degenerate").get_to(r.degenerate);
    j.at("degenerate_reason").get_to(r.degenerate_reason);
    j.at("w_total").get_to(r.w_total);
    j.at("l3_tilde").get_to(r.l3_tilde);
    j.at("u_triangle").get_to(r.u_triangle);
    j.at("u_lambda").get_to(r.u_lambda);
    j.at("caps_clamped").get_to(r.caps_clamped);
    j.at("caps").get_to(r.caps);
    for (const auto& jr : j.at("restarts")) {
        RestartSummary rs;
        jr.at("index").get_to(rs.index);
        jr.at("candidate_value").get_to(rs.candidate_value);
        jr.at("seconds").get_to(rs.seconds);
        for (const auto& js : jr.at("steps")) {
            StepSummary ss;
            js.at("t").get_to(ss.t);
            js.at("sdp_value").get_to(ss.sdp_value);
            js.at("quad_value").get_to(ss.quad_value);
            js.at("f_proxy").get_to(ss.f_proxy);
            js.at("solver_steps").get_to(ss.solver_steps);
            rs.steps.push_back(ss);
        }
        r.restarts.push_back(std::move(rs));
    }
    j.at("chosen_restart").get_to(r.chosen_restart);
    j.at("final_weights").get_to(r.final_weights);
    j.at("total_seconds").get_to(r.total_seconds);
    return r;
}

void scrub_timing(nlohmann::json& j) {
    if (j.is_object()) {
        j.erase("total_seconds");
        j.erase("seconds");
        for (auto& [key, value] : j.items()) scrub_timing(value);
    } else if (j.is_array()) {
        for (auto& value : j) scrub_timing(value);
    }
}

std::string csv_header() {
    return "seed,n,epsilon,delta,beta,degenerate,caps_clamped,w_total,l3_tilde,u_triangle,"
           "u_lambda,restarts,steps,lambda,eta,chosen_restart,total_seconds";
}

std::string csv_row(const MechanismReport& r) {
    std::ostringstream out;
    out.precision(17);
    out << r.seed << ',' << r.n << ',' << r.params.epsilon << ',' << r.params.delta << ','
        << r.params.beta << ',' << (r.degenerate ? 1 : 0) << ',' << (r.caps_clamped ? 1 : 0)
        << ',' << r.w_total << ',' << r.l3_tilde << ',' << r.u_triangle << ',' << r.u_lambda
        << ',' << r.params.restarts << ',' << r.params.steps << ',' << r.params.lambda << ','
        << r.params.eta << ',' << r.chosen_restart << ',' << r.total_seconds;
    return out.str();
}

void emit_report(const MechanismReport& report, std::ostream& out, ReportFormat format) {
    if (format == ReportFormat::json) {
        out << report_to_json(report).dump(2) << "\n";
    } else {
        out << csv_header() << "\n" << csv_row(report) << "\n";
    }
}

void emit_report_file(const MechanismReport& report, const std::string& path,
                      ReportFormat format) {
    std::ofstream out(path);
    if (!out) throw InputError(path + ": cannot open for writing");
    emit_report(report, out, format);
    if (!out) throw InputError(path + ": write failed");
}

}  // namespace motifcut
