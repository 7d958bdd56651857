#ifndef RCEPC_PLOT_HPP
#define RCEPC_PLOT_HPP

#include <string>
#include <vector>

#include "rcepc/experiment.hpp"

namespace rcepc {

enum class PlotAxis { available, radiated, pa };

PlotAxis plot_axis_from_name(const std::string& name);

// BER curves on a log y-axis, one polyline per precoder, written as a
// standalone SVG. db_axis switches the power axis to 10 log10(W).
std::string render_plot_svg(const std::vector<ResultRow>& rows, PlotAxis axis,
                            bool db_axis);
void emit_plot(const std::vector<ResultRow>& rows, PlotAxis axis,
               const std::string& path, bool db_axis = false);

}  // namespace rcepc

#endif
