#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "nlbif/c_curves.hpp"
#include "nlbif/chafee_infante.hpp"
#include "nlbif/nonlocal_equilibria.hpp"
#include "nlbif/pde_sim.hpp"
#include "nlbif/spectral.hpp"

namespace nlbif {

/// Shortest-safe round-trip formatting used by every CSV writer ("%.17g").
std::string fmt(double x);

std::string ccurve_csv(const CCurve& curve);
std::string profile_csv(const EquilibriumCI& eq);
std::string equilibria_csv(const EquilibriumSet& set);
std::string branches_csv(const BifurcationDiagram& d);
std::string counts_csv(const BifurcationDiagram& d);
std::string trajectory_csv(const TrajectoryLog& log);
std::string epsilon_csv(const EpsilonSweep& sweep);

nlohmann::json events_json(const BifurcationDiagram& d);
nlohmann::json spectral_json(const SpectralReport& rep);

/// nu horizontal, r vertical; branch segments coloured by Morse index, events marked.
std::string diagram_svg(const BifurcationDiagram& d, double r_cap = -1.0);

/// Lower-case hex SHA-256 of a file's bytes.
std::string sha256_file(const std::filesystem::path& path);

/// Writes files below a root directory and remembers each relative path.
class ArtifactWriter {
public:
    explicit ArtifactWriter(std::filesystem::path root) : root_(std::move(root)) {}

    void write(const std::string& relative, const std::string& content);
    void write_json(const std::string& relative, const nlohmann::json& doc);

    const std::filesystem::path& root() const { return root_; }
    const std::vector<std::string>& written() const { return written_; }

private:
    std::filesystem::path root_;
    std::vector<std::string> written_;
};

} // namespace nlbif
