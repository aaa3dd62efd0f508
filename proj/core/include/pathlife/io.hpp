#pragma once

#include "pathlife/chain_simulation.hpp"
#include "pathlife/reserve_engine.hpp"
#include "pathlife/simulation.hpp"
#include "pathlife/stopped_path.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace pathlife {

// Shortest round-trippable decimal rendering of a double; all CSV bodies are
// deterministic byte-for-byte for a fixed input.
std::string format_double(double v);

// Single path, columns time,value.
void write_path_csv(std::ostream& os, const StoppedPath& path);
// Batch, columns path,time,value.
void write_batch_csv(std::ostream& os, const ScenarioBatch& batch);

// Compact binary scenario cache: grid nodes once, then per path the stop
// index, values and bump. Round-trips exactly.
void write_batch_binary(std::ostream& os, const ScenarioBatch& batch);
ScenarioBatch read_batch_binary(std::istream& is);

// Trajectory event lists, columns trajectory,time,from_state,to_state.
void write_trajectories_csv(std::ostream& os, const std::vector<ChainTrajectory>& trajectories);

// Reserve report, columns method,state,time,value,std_error,n_outer,n_inner.
void write_reserve_csv(std::ostream& os, const std::vector<ReserveRow>& rows);

} // namespace pathlife
