#include "qwalk/landscape.hpp"

#include <sstream>
#include <stdexcept>

#include "landscape_data.hpp"

namespace qwalk {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

std::optional<double> parse_optional(const std::string& field, const char* what) {
    if (field.empty()) return std::nullopt;
    try {
        return std::stod(field);
    } catch (const std::exception&) {
        throw std::runtime_error(std::string("landscape: bad ") + what + " value '" + field + "'");
    }
}

}  // namespace

const std::string& landscape_csv() {
    static const std::string data = detail::kLandscapeCsv;
    return data;
}

std::vector<LandscapeEntry> parse_landscape(const std::string& csv) {
    std::istringstream in(csv);
    std::string line;
    if (!std::getline(in, line) ||
        line != "year,reference,steps,loss_db_per_step,fidelity,photons,platform")
        throw std::runtime_error("landscape: unexpected header");
    std::vector<LandscapeEntry> out;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const std::vector<std::string> f = split_csv_line(line);
        if (f.size() != 7) throw std::runtime_error("landscape: malformed row '" + line + "'");
        LandscapeEntry e;
        try {
            e.year = std::stoi(f[0]);
            e.steps = std::stoi(f[2]);
            e.photons = std::stoi(f[5]);
        } catch (const std::exception&) {
            throw std::runtime_error("landscape: malformed row '" + line + "'");
        }
        e.reference = f[1];
        e.loss_db_per_step = parse_optional(f[3], "loss");
        e.fidelity = parse_optional(f[4], "fidelity");
        e.platform = f[6];
        out.push_back(std::move(e));
    }
    if (out.empty()) throw std::runtime_error("landscape: no data rows");
    return out;
}

std::vector<LandscapeEntry> landscape_entries() {
    return parse_landscape(landscape_csv());
}

}  // namespace qwalk
