#include "mechent/csv.hpp"

#include <cmath>
#include <ostream>

namespace mechent {

const char* code_version() { return MECHENT_VERSION; }

void write_preamble(std::ostream& out, const std::string& scenario, const KeyValueConfig& settings)
{
    out << "# mechent " << code_version() << '\n';
    out << "# scenario = " << scenario << '\n';
    out << "# units: times in 1/omega_m, rates and frequencies in omega_m, temperature as T/T0\n";
    for (const auto& [k, v] : settings.entries())
        out << "# " << k << " = " << v << '\n';
}

void write_timeseries_csv(std::ostream& out, const TrajectoryRecord& traj, double period)
{
    out << "t,t_over_tau,E_N,nu_minus\n";
    for (std::size_t i = 0; i < traj.times.size(); ++i)
        out << format_double(traj.times[i]) << ',' << format_double(traj.times[i] / period) << ','
            << format_double(traj.log_negativity[i]) << ',' << format_double(traj.nu_minus[i])
            << '\n';
}

void write_sweep_csv(std::ostream& out, const SweepResult& sweep)
{
    out << sweep.parameter << ",status,E_N,signed_log_negativity,settle_time,divergence_time,error\n";
    for (const auto& pt : sweep.points) {
        const auto& r = pt.result;
        out << format_double(pt.value) << ',' << (pt.error.empty() ? to_string(r.status) : "failed")
            << ',' << format_double(r.e_n) << ',' << format_double(r.signed_value) << ','
            << format_double(r.settle_time) << ',' << format_double(r.divergence_time) << ',';
        // keep the error text a single CSV field
        for (char c : pt.error)
            out << (c == ',' || c == '\n' ? ';' : c);
        out << '\n';
    }
}

void write_wigner_csv(std::ostream& out, const WignerField& field)
{
    out << "x,p,W\n";
    const std::size_t np = field.p.size();
    for (std::size_t i = 0; i < field.x.size(); ++i)
        for (std::size_t j = 0; j < np; ++j)
            out << format_double(field.x[i]) << ',' << format_double(field.p[j]) << ','
                << format_double(field.values[i * np + j]) << '\n';
}

void write_covariance_csv(std::ostream& out, const std::vector<CovarianceSnapshot>& snapshots)
{
    for (const auto& s : snapshots) {
        out << "# t = " << format_double(s.t) << '\n';
        for (int i = 0; i < kDim; ++i) {
            for (int j = 0; j < kDim; ++j)
                out << (j ? "," : "") << format_double(s.v(i, j));
            out << '\n';
        }
    }
}

void write_chart_csv(std::ostream& out, const std::vector<ChartCell>& cells)
{
    out << "epsilon,delta,classification\n";
    for (const auto& c : cells)
        out << format_double(c.epsilon) << ',' << format_double(c.delta) << ','
            << to_string(c.classification) << '\n';
}

void write_markers_csv(std::ostream& out, const std::vector<ChartMarker>& markers)
{
    out << "lambda0,epsilon,delta,classification\n";
    for (const auto& m : markers)
        out << format_double(m.lambda0) << ',' << format_double(m.point.epsilon) << ','
            << format_double(m.point.delta) << ',' << to_string(m.point.classification) << '\n';
}

} // namespace mechent
