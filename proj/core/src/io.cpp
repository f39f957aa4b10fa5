#include "affinedim/io.hpp"

#include <cstring>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace affinedim {

namespace {

using nlohmann::json;

AffineIFS ifs_from_json(const json& j, const std::string& origin) {
    if (!j.contains("dim") || !j.contains("maps") || !j.contains("p"))
        throw SpecParseError(origin + ": spec requires fields dim, maps, p");
    const int d = j.at("dim").get<int>();
    if (d < 1) throw SpecParseError(origin + ": dim must be >= 1");
    std::vector<AffineMap> maps;
    for (const auto& jm : j.at("maps")) {
        if (!jm.contains("A") || !jm.contains("a"))
            throw SpecParseError(origin + ": each map needs fields A and a");
        auto flat = jm.at("A").get<std::vector<double>>();
        auto trans = jm.at("a").get<std::vector<double>>();
        if (static_cast<int>(flat.size()) != d * d)
            throw SpecParseError(origin + ": A must have dim*dim entries");
        if (static_cast<int>(trans.size()) != d)
            throw SpecParseError(origin + ": a must have dim entries");
        AffineMap m;
        m.linear.resize(d, d);
        for (int r = 0; r < d; ++r)
            for (int c = 0; c < d; ++c) m.linear(r, c) = flat[static_cast<std::size_t>(r * d + c)];
        m.translation = Eigen::Map<Vector>(trans.data(), d);
        maps.push_back(std::move(m));
    }
    auto probs = j.at("p").get<std::vector<double>>();
    return AffineIFS(std::move(maps), std::move(probs));
}

}  // namespace

AffineIFS parse_ifs(const std::string& json_text, const std::string& origin) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw SpecParseError(origin + ": " + e.what());
    }
    return ifs_from_json(j, origin);
}

AffineIFS load_ifs(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SpecParseError(path + ": cannot open");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_ifs(ss.str(), path);
}

void save_ifs(const AffineIFS& ifs, const std::string& path) {
    json j;
    j["dim"] = ifs.dim();
    j["p"] = ifs.probs();
    json jmaps = json::array();
    for (const auto& m : ifs.maps()) {
        std::vector<double> flat;
        for (int r = 0; r < ifs.dim(); ++r)
            for (int c = 0; c < ifs.dim(); ++c) flat.push_back(m.linear(r, c));
        std::vector<double> trans(m.translation.data(),
                                  m.translation.data() + m.translation.size());
        jmaps.push_back({{"A", flat}, {"a", trans}});
    }
    j["maps"] = jmaps;
    std::ofstream out(path);
    if (!out) throw Error(path + ": cannot open for writing");
    out << j.dump(2) << "\n";
}

void write_point_cloud(const EmpiricalMeasure& theta, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(path + ": cannot open for writing");
    const char magic[4] = {'A', 'F', 'P', 'C'};
    std::uint32_t version = 1;
    std::uint64_t n = static_cast<std::uint64_t>(theta.size());
    std::uint32_t m = static_cast<std::uint32_t>(theta.ambient_dim);
    out.write(magic, 4);
    out.write(reinterpret_cast<const char*>(&version), 4);
    out.write(reinterpret_cast<const char*>(&n), 8);
    out.write(reinterpret_cast<const char*>(&m), 4);
    for (long i = 0; i < theta.size(); ++i)
        for (int c = 0; c < theta.ambient_dim; ++c) {
            double v = theta.points(i, c);
            out.write(reinterpret_cast<const char*>(&v), 8);
        }
}

EmpiricalMeasure read_point_cloud(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(path + ": cannot open");
    char magic[4];
    std::uint32_t version = 0, m = 0;
    std::uint64_t n = 0;
    in.read(magic, 4);
    in.read(reinterpret_cast<char*>(&version), 4);
    in.read(reinterpret_cast<char*>(&n), 8);
    in.read(reinterpret_cast<char*>(&m), 4);
    if (!in || std::memcmp(magic, "AFPC", 4) != 0)
        throw SpecParseError(path + ": bad point-cloud header");
    if (version != 1) throw SpecParseError(path + ": unsupported version");
    Matrix pts(static_cast<long>(n), static_cast<int>(m));
    for (std::uint64_t i = 0; i < n; ++i)
        for (std::uint32_t c = 0; c < m; ++c) {
            double v;
            in.read(reinterpret_cast<char*>(&v), 8);
            pts(static_cast<long>(i), static_cast<int>(c)) = v;
        }
    if (!in) throw SpecParseError(path + ": truncated point cloud");
    return EmpiricalMeasure::uniform(std::move(pts));
}

void write_points_csv(const EmpiricalMeasure& theta, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error(path + ": cannot open for writing");
    out.precision(17);
    for (long i = 0; i < theta.size(); ++i) {
        for (int c = 0; c < theta.ambient_dim; ++c) {
            if (c) out << ',';
            out << theta.points(i, c);
        }
        out << '\n';
    }
}

}  // namespace affinedim
