#pragma once

// Coefficient CSVs and state directories (q.csv, phi.csv, ledger.json).

#include <filesystem>
#include <string>

#include "linbill/driver.hpp"
#include "linbill/oracle.hpp"

namespace linbill {

/// Header "k,re", one row per coefficient 0..max_degree.
void write_csv(const std::filesystem::path& path, const UniSeries& q);
/// Header "j,k,re,im", one row per coefficient in degree-major order.
void write_csv(const std::filesystem::path& path, const BiSeries& phi);

/// Readers infer max_degree from the largest index present; missing rows are zero.
/// Throws FormatError on malformed input.
UniSeries read_uni_csv(const std::filesystem::path& path, int precision_bits);
BiSeries read_bi_csv(const std::filesystem::path& path, int precision_bits);

struct RunInfo {
    Real theta;
    int precision_bits = 256;
    double c = 0.0;
    double tau = 0.0;
};

/// Ledger of a run as JSON text.
std::string ledger_json(const IterationState& state, const RunInfo& info);

void save_state(const std::filesystem::path& dir, const IterationState& state, const RunInfo& info);

struct LoadedState {
    IterationState state;
    RunInfo info;
};

/// Restores q, phi, the schedule position and the history.  The geometry cache is left empty.
LoadedState load_state(const std::filesystem::path& dir);

/// Same directory layout; the ledger carries solved_through and schedule "direct".
void save_direct(const std::filesystem::path& dir, const DirectSolution& sol, const RunInfo& info);
DirectSolution load_direct(const std::filesystem::path& dir);

/// CSV (psi, x, y).
void write_boundary_csv(const std::filesystem::path& path, const std::vector<BoundaryPoint>& points);

} // namespace linbill
