#include "nlshear/snapshot.hpp"

#include "nlshear/errors.hpp"

#include "json.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>

namespace nlshear {

namespace {

std::filesystem::path with_ext(std::filesystem::path p, const char* ext) {
    if (p.extension() == ".raw" || p.extension() == ".json") p.replace_extension();
    p += ext;
    return p;
}

std::uint64_t to_little(std::uint64_t x) {
    if constexpr (std::endian::native == std::endian::big) {
        std::uint64_t r = 0;
        for (int k = 0; k < 8; ++k) r |= ((x >> (8 * k)) & 0xffu) << (8 * (7 - k));
        return r;
    }
    return x;
}

} // namespace

void write_snapshot(const std::filesystem::path& stem, const SpectralField& f, double time, const std::string& name) {
    const Grid2D& g = f.grid();
    std::ofstream raw(with_ext(stem, ".raw"), std::ios::binary);
    if (!raw) throw std::runtime_error("snapshot: cannot write " + with_ext(stem, ".raw").string());
    for (double x : f.values()) {
        std::uint64_t bits = to_little(std::bit_cast<std::uint64_t>(x));
        char buf[8];
        std::memcpy(buf, &bits, 8);
        raw.write(buf, 8);
    }
    nlohmann::ordered_json meta{{"nx", g.nx()}, {"ny", g.ny()}, {"lx", g.lx()},
                                {"ly", g.ly()}, {"time", time}, {"field", name}};
    std::ofstream js(with_ext(stem, ".json"));
    js << meta.dump(2) << '\n';
}

SpectralField read_snapshot(const std::filesystem::path& path, SnapshotMeta* meta_out) {
    std::ifstream js(with_ext(path, ".json"));
    if (!js) throw ConfigError("snapshot: missing metadata " + with_ext(path, ".json").string());
    nlohmann::json j;
    try {
        js >> j;
    } catch (const std::exception& e) {
        throw ConfigError("snapshot: bad metadata " + with_ext(path, ".json").string() + ": " + e.what());
    }
    SnapshotMeta meta;
    meta.nx = j.at("nx").get<int>();
    meta.ny = j.at("ny").get<int>();
    meta.lx = j.at("lx").get<double>();
    meta.ly = j.at("ly").get<double>();
    meta.time = j.value("time", 0.0);
    meta.field = j.value("field", std::string{});
    Grid2D g(meta.nx, meta.ny, meta.lx, meta.ly);

    std::ifstream raw(with_ext(path, ".raw"), std::ios::binary);
    if (!raw) throw ConfigError("snapshot: missing data " + with_ext(path, ".raw").string());
    std::vector<double> values(g.size());
    for (double& x : values) {
        char buf[8];
        if (!raw.read(buf, 8)) throw ConfigError("snapshot: truncated data in " + with_ext(path, ".raw").string());
        std::uint64_t bits;
        std::memcpy(&bits, buf, 8);
        x = std::bit_cast<double>(to_little(bits));
    }
    if (meta_out) *meta_out = meta;
    return SpectralField::from_values(g, std::move(values));
}

} // namespace nlshear
