#pragma once

// Corpus manifest: one row per rendered frame, CSV on disk.

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "signwave/errors.hpp"
#include "signwave/sign_id.hpp"
#include "signwave/text.hpp"

namespace signwave::corpus {

struct ManifestRow {
    std::string file;  // relative to the manifest location
    SignId sign;
    double azimuth = 0.0;
    double distance_m = 0.0;
    double altitude_m = 0.0;
    std::uint64_t seed = 0;

    friend bool operator==(const ManifestRow&, const ManifestRow&) = default;
};

inline constexpr const char* kManifestHeader = "file,sign,azimuth,distance_m,altitude_m,seed";

inline std::string to_csv(const ManifestRow& row) {
    return row.file + "," + row.sign + "," + text::format_double(row.azimuth) + "," +
           text::format_double(row.distance_m) + "," + text::format_double(row.altitude_m) + "," +
           std::to_string(row.seed);
}

inline void write_manifest(const std::vector<ManifestRow>& rows, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write manifest: " + path.string());
    out << kManifestHeader << "\n";
    for (const auto& row : rows) out << to_csv(row) << "\n";
    if (!out) throw IoError("short write: " + path.string());
}

inline std::vector<ManifestRow> read_manifest(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open manifest: " + path.string());
    std::string line;
    if (!std::getline(in, line) || text::trim(line) != kManifestHeader)
        throw IoError("manifest: missing or unexpected header in " + path.string());
    std::vector<ManifestRow> rows;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        const auto trimmed = text::trim(line);
        if (trimmed.empty()) continue;
        const auto fields = text::split(trimmed, ',');
        if (fields.size() != 6)
            throw IoError("manifest: expected 6 fields at line " + std::to_string(lineno));
        ManifestRow row;
        row.file = std::string(fields[0]);
        row.sign = std::string(fields[1]);
        const auto az = text::parse_double(fields[2]);
        const auto dist = text::parse_double(fields[3]);
        const auto alt = text::parse_double(fields[4]);
        const auto seed = text::parse_uint(fields[5]);
        if (!az || !dist || !alt || !seed)
            throw IoError("manifest: bad numeric field at line " + std::to_string(lineno));
        row.azimuth = *az;
        row.distance_m = *dist;
        row.altitude_m = *alt;
        row.seed = static_cast<std::uint64_t>(*seed);
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace signwave::corpus
