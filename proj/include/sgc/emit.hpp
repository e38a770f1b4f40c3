#ifndef SGC_EMIT_HPP
#define SGC_EMIT_HPP

#include <json.hpp>

#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "sgc/density_evolution.hpp"
#include "sgc/experiment.hpp"
#include "sgc/weight_enum.hpp"

namespace sgc {

inline constexpr const char* kRecordCsvHeader = "n,param,pb,pb_ci,pB,pB_ci,trials,avg_iters";

inline std::string records_to_csv(const std::vector<ErrorRateRecord>& records) {
    std::ostringstream os;
    os << kRecordCsvHeader << '\n';
    os << std::setprecision(17);
    for (const auto& r : records)
        os << r.n << ',' << r.param << ',' << r.pb << ',' << r.pb_ci << ',' << r.pB
           << ',' << r.pB_ci << ',' << r.trials << ',' << r.avg_iters << '\n';
    return os.str();
}

inline std::vector<ErrorRateRecord> records_from_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != kRecordCsvHeader)
        throw std::invalid_argument("unexpected CSV header: " + line);
    std::vector<ErrorRateRecord> out;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        ErrorRateRecord r;
        char comma;
        if (!(ls >> r.n >> comma >> r.param >> comma >> r.pb >> comma >> r.pb_ci >>
              comma >> r.pB >> comma >> r.pB_ci >> comma >> r.trials >> comma >>
              r.avg_iters))
            throw std::invalid_argument("bad CSV row: " + line);
        out.push_back(r);
    }
    return out;
}

inline nlohmann::json record_to_json(const ErrorRateRecord& r) {
    return {{"n", r.n},
            {"param", r.param},
            {"pb", r.pb},
            {"pb_ci", r.pb_ci},
            {"pB", r.pB},
            {"pB_ci", r.pB_ci},
            {"trials", r.trials},
            {"avg_iters", r.avg_iters},
            {"type_mean", r.type_mean},
            {"type_max_dev", r.type_max_dev},
            {"residual_unsat_mean", r.residual_unsat_mean}};
}

inline ErrorRateRecord record_from_json(const nlohmann::json& j) {
    ErrorRateRecord r;
    r.n = j.at("n").get<std::size_t>();
    r.param = j.at("param").get<double>();
    r.pb = j.at("pb").get<double>();
    r.pb_ci = j.at("pb_ci").get<double>();
    r.pB = j.at("pB").get<double>();
    r.pB_ci = j.at("pB_ci").get<double>();
    r.trials = j.at("trials").get<std::size_t>();
    r.avg_iters = j.at("avg_iters").get<double>();
    r.type_mean = j.value("type_mean", 0.0);
    r.type_max_dev = j.value("type_max_dev", 0.0);
    r.residual_unsat_mean = j.value("residual_unsat_mean", 0.0);
    return r;
}

inline std::string records_to_json(const std::vector<ErrorRateRecord>& records) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : records) arr.push_back(record_to_json(r));
    return arr.dump(2);
}

inline std::vector<ErrorRateRecord> records_from_json(const std::string& text) {
    std::vector<ErrorRateRecord> out;
    for (const auto& j : nlohmann::json::parse(text)) out.push_back(record_from_json(j));
    return out;
}

inline std::string trajectory_to_csv(const DeTrajectory& traj) {
    std::ostringstream os;
    os << "t,pb,entropy\n" << std::setprecision(17);
    for (std::size_t t = 0; t < traj.pb.size(); ++t)
        os << t << ',' << traj.pb[t] << ',' << traj.entropy[t] << '\n';
    return os.str();
}

struct GrowthRateCurve {
    std::size_t var_degree = 0, chk_degree = 0;
    std::vector<double> omega, phi, z;
};

inline std::string curve_to_csv(const GrowthRateCurve& curve) {
    std::ostringstream os;
    os << "omega,phi,z\n" << std::setprecision(17);
    for (std::size_t i = 0; i < curve.omega.size(); ++i)
        os << curve.omega[i] << ',' << curve.phi[i] << ',' << curve.z[i] << '\n';
    return os.str();
}

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << content;
    if (!out) throw std::runtime_error("write failed: " + path);
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open for reading: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

enum class EmitFormat { Csv, Json };

inline void emit(const std::vector<ErrorRateRecord>& records, const std::string& path,
                 EmitFormat format) {
    write_file(path, format == EmitFormat::Csv ? records_to_csv(records)
                                               : records_to_json(records));
}

}  // namespace sgc

#endif
