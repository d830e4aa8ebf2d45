#pragma once

#include <optional>
#include <string>
#include <vector>

namespace qwalk {

// One published walk experiment for the loss-per-step landscape plot.
// loss_db_per_step and fidelity stay empty where a study did not report them.
struct LandscapeEntry {
    int year = 0;
    std::string reference;
    int steps = 0;
    std::optional<double> loss_db_per_step;
    std::optional<double> fidelity;
    int photons = 1;
    std::string platform;
};

// The bundled survey table, compiled into the binary so the plot needs no
// files at runtime.
const std::string& landscape_csv();

std::vector<LandscapeEntry> parse_landscape(const std::string& csv);

// parse_landscape applied to the bundled table.
std::vector<LandscapeEntry> landscape_entries();

}  // namespace qwalk
