#pragma once

#include "resbench/models.hpp"

#include <span>
#include <vector>

namespace resbench::detail {

std::vector<double> predict_delay_line(const DelayLineWeights& w, std::span<const double> u);
std::vector<double> esn_readout(const Matrix& states, const Matrix& w_out);
std::vector<double> predict_narx(const NarxParams& params, std::span<const double> u);

/// Fills meta.sse / meta.train_rnmse from predictions covering at least the
/// training prefix.
void record_training_error(TrainedModel& model, const Dataset& data,
                           std::span<const double> prediction);

} // namespace resbench::detail
