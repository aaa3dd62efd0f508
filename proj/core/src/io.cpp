#include "pathlife/io.hpp"

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace pathlife {

std::string format_double(double v) {
    char buf[40];
    // %.17g always round-trips; trim to the shortest representation that does
    for (int prec = 1; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v) return buf;
    }
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_path_csv(std::ostream& os, const StoppedPath& path) {
    os << "time,value\n";
    for (std::size_t i = 0; i <= path.stop_index(); ++i)
        os << format_double(path.grid().node(i)) << ',' << format_double(path.node_value(i))
           << '\n';
}

void write_batch_csv(std::ostream& os, const ScenarioBatch& batch) {
    os << "path,time,value\n";
    for (std::size_t p = 0; p < batch.paths.size(); ++p)
        for (std::size_t i = 0; i <= batch.paths[p].stop_index(); ++i)
            os << p << ',' << format_double(batch.grid->node(i)) << ','
               << format_double(batch.paths[p].node_value(i)) << '\n';
}

namespace {

constexpr std::uint32_t kMagic = 0x504C4231u; // "PLB1"

template <class T>
void put(std::ostream& os, const T& v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::istream& is) {
    T v{};
    is.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!is) throw std::runtime_error("scenario cache: truncated stream");
    return v;
}

} // namespace

void write_batch_binary(std::ostream& os, const ScenarioBatch& batch) {
    put(os, kMagic);
    put(os, static_cast<std::uint32_t>(batch.measure));
    put(os, batch.seed);
    put(os, static_cast<std::uint64_t>(batch.grid->size()));
    for (double node : batch.grid->nodes()) put(os, node);
    put(os, static_cast<std::uint64_t>(batch.paths.size()));
    for (const auto& path : batch.paths) {
        put(os, static_cast<std::uint64_t>(path.stop_index()));
        put(os, path.bump());
        for (std::size_t i = 0; i <= path.stop_index(); ++i) put(os, path.raw_node_value(i));
    }
}

ScenarioBatch read_batch_binary(std::istream& is) {
    if (get<std::uint32_t>(is) != kMagic)
        throw std::runtime_error("scenario cache: bad magic");
    ScenarioBatch batch;
    batch.measure = static_cast<Measure>(get<std::uint32_t>(is));
    batch.seed = get<std::uint64_t>(is);
    const auto n_nodes = get<std::uint64_t>(is);
    std::vector<double> nodes(n_nodes);
    for (auto& node : nodes) node = get<double>(is);
    batch.grid = std::make_shared<const TimeGrid>(std::move(nodes));
    const auto n_paths = get<std::uint64_t>(is);
    batch.paths.reserve(n_paths);
    for (std::uint64_t p = 0; p < n_paths; ++p) {
        const auto stop = static_cast<std::size_t>(get<std::uint64_t>(is));
        const double bump = get<double>(is);
        std::vector<double> values(stop + 1);
        for (auto& v : values) v = get<double>(is);
        batch.paths.emplace_back(batch.grid, stop, std::move(values), bump);
    }
    return batch;
}

void write_trajectories_csv(std::ostream& os, const std::vector<ChainTrajectory>& trajectories) {
    os << "trajectory,time,from_state,to_state\n";
    for (std::size_t k = 0; k < trajectories.size(); ++k)
        for (const auto& e : trajectories[k].events)
            os << k << ',' << format_double(e.time) << ',' << e.from << ',' << e.to << '\n';
}

void write_reserve_csv(std::ostream& os, const std::vector<ReserveRow>& rows) {
    os << "method,state,time,value,std_error,n_outer,n_inner\n";
    for (const auto& r : rows) {
        const char* method = r.method == ReserveMethod::res2_nested ? "res2-nested"
                             : r.method == ReserveMethod::res1_direct ? "res1-direct"
                                                                      : "oracle";
        os << method << ',' << r.state << ',' << format_double(r.time) << ','
           << format_double(r.value) << ',' << format_double(r.std_error) << ',' << r.n_outer
           << ',' << r.n_inner << '\n';
    }
}

} // namespace pathlife
