#include "dap/metrics.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace dap {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string metrics_csv_header() {
    return "step,eval_return_mean,eval_return_std,delta_r_mean,sigma_mean,action_gap_mean,"
           "critic_loss,actor_loss,alpha_loss,classifier_loss,alpha";
}

std::string metrics_csv_row(const MetricsRow& r) {
    std::string out = std::to_string(r.step);
    for (double v : {r.eval_return_mean, r.eval_return_std, r.delta_r_mean, r.sigma_mean,
                     r.action_gap_mean, r.critic_loss, r.actor_loss, r.alpha_loss,
                     r.classifier_loss, r.alpha}) {
        out += "," + format_double(v);
    }
    return out;
}

std::string metrics_to_csv(const std::vector<MetricsRow>& rows) {
    std::string out = metrics_csv_header() + "\n";
    for (const auto& r : rows) out += metrics_csv_row(r) + "\n";
    return out;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    out << content;
    if (!out) throw std::runtime_error("write failure on '" + path + "'");
}

}  // namespace dap
