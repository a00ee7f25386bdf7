#pragma once

#include <string>
#include <vector>

namespace dap {

struct MetricsRow {
    long step = 0;
    double eval_return_mean = 0.0;
    double eval_return_std = 0.0;
    double delta_r_mean = 0.0;
    double sigma_mean = 0.0;
    double action_gap_mean = 0.0;  // mean |a_src - a_tgt| over the window
    double critic_loss = 0.0;
    double actor_loss = 0.0;
    double alpha_loss = 0.0;
    double classifier_loss = 0.0;
    double alpha = 0.0;
};

// Fixed header; doubles printed with %.17g so identical runs produce
// byte-identical files.
std::string metrics_csv_header();
std::string metrics_csv_row(const MetricsRow& row);
std::string metrics_to_csv(const std::vector<MetricsRow>& rows);
void write_text_file(const std::string& path, const std::string& content);

std::string format_double(double v);

}  // namespace dap
