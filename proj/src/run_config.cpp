#include "motifcut/run_config.hpp"

namespace motifcut {

nlohmann::json run_config_to_json(const RunConfig& c) {
    return nlohmann::json{{"subcommand", c.subcommand},
                          {"input", c.input},
                          {"output", c.output},
                          {"report_path", c.report_path},
                          {"csv_path", c.csv_path},
                          {"model", c.model},
                          {"n", c.n},
                          {"p", c.p},
                          {"degree", c.degree},
                          {"epsilon", c.epsilon},
                          {"delta", c.delta},
                          {"beta", c.beta},
                          {"seed", c.seed},
                          {"seed_lo", c.seed_lo},
                          {"seed_hi", c.seed_hi},
                          {"sweep", c.sweep},
                          {"c_t", c.constants.c_t},
                          {"c_lambda", c.constants.c_lambda},
                          {"c_eta", c.constants.c_eta},
                          {"c_deg_w", c.constants.c_deg_w},
                          {"c_deg_l3", c.constants.c_deg_l3},
                          {"cut_mode", c.cut_mode},
                          {"other", c.other},
                          {"baseline", c.baseline},
                          {"clip_negative", c.clip_negative},
                          {"format", c.format}};
}

RunConfig run_config_from_json(const nlohmann::json& j) {
    RunConfig c;
    c.subcommand = j.at("subcommand").get<std::string>();
    c.input = j.at("input").get<std::string>();
    c.output = j.at("output").get<std::string>();
    c.report_path = j.at("report_path").get<std::string>();
    c.csv_path = j.at("csv_path").get<std::string>();
    c.model = j.at("model").get<std::string>();
    c.n = j.at("n").get<int>();
    c.p = j.at("p").get<double>();
    c.degree = j.at("degree").get<int>();
    c.epsilon = j.at("epsilon").get<double>();
    c.delta = j.at("delta").get<double>();
    c.beta = j.at("beta").get<double>();
    c.seed = j.at("seed").get<std::uint64_t>();
    c.seed_lo = j.at("seed_lo").get<std::uint64_t>();
    c.seed_hi = j.at("seed_hi").get<std::uint64_t>();
    c.sweep = j.at("sweep").get<bool>();
    c.constants.c_t = j.at("c_t").get<double>();
    c.constants.c_lambda = j.at("c_lambda").get<double>();
    c.constants.c_eta = j.at("c_eta").get<double>();
    c.constants.c_deg_w = j.at("c_deg_w").get<double>();
    c.constants.c_deg_l3 = j.at("c_deg_l3").get<double>();
    c.cut_mode = j.at("cut_mode").get<std::string>();
    c.other = j.at("other").get<std::string>();
    c.baseline = j.at("baseline").get<std::string>();
    c.clip_negative = j.at("clip_negative").get<bool>();
    c.format = j.at("format").get<std::string>();
    return c;
}

}  // namespace motifcut
