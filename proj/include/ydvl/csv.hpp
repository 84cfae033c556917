#pragma once

#include <charconv>
#include <fstream>
#include <string>
#include <vector>

#include "ydvl/diagnostics.hpp"

namespace ydvl {

namespace csv_detail {

// 17 significant digits, '.' decimal separator, locale-independent.
inline std::string fmt(double v) {
    char buf[64];
    const auto res =
        std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

}  // namespace csv_detail

// Comma-delimited diagnostics table, one row per record. Column set is the
// wire contract consumed by external tooling; keep it stable.
inline std::string diagnostics_csv(const std::vector<DiagnosticsRecord>& series,
                                   double p0) {
    if (series.empty())
        throw ValidationError("csv.emit_diagnostics: empty series");
    std::string out =
        "t,energy,lp_omega_2,lp_omega_p0,lp_omega_inf,lp_eta_p0,sup_u,"
        "sup_grad_rho,dxu_sup,m_accum,eta_identity_resid,x_identity_resid,"
        "pressure_l2,div_u_sup\n";
    for (const auto& r : series) {
        using csv_detail::fmt;
        out += fmt(r.t);
        out += ',';
        out += fmt(r.energy);
        out += ',';
        out += fmt(r.lp_omega.at(2.0));
        out += ',';
        out += fmt(r.lp_omega.at(p0));
        out += ',';
        out += fmt(r.lp_omega.at(inf_p));
        out += ',';
        out += fmt(r.lp_eta.at(p0));
        out += ',';
        out += fmt(r.sup_u);
        out += ',';
        out += fmt(r.sup_grad_rho);
        out += ',';
        out += fmt(r.dxu_sup);
        out += ',';
        out += fmt(r.m_accum);
        out += ',';
        out += fmt(r.eta_identity_resid);
        out += ',';
        out += fmt(r.x_identity_resid);
        out += ',';
        out += fmt(r.pressure_l2);
        out += ',';
        out += fmt(r.div_u_sup);
        out += '\n';
    }
    return out;
}

inline void emit_diagnostics_csv(const std::vector<DiagnosticsRecord>& series,
                                 double p0, const std::string& path) {
    const std::string body = diagnostics_csv(series, p0);
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("csv.emit_diagnostics: cannot open '" + path + "'");
    os.write(body.data(), static_cast<std::streamsize>(body.size()));
    if (!os) throw IoError("csv.emit_diagnostics: write to '" + path + "' failed");
}

}  // namespace ydvl
