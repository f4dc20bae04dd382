#include "kh/store.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace kh {

using nlohmann::json;

std::string group_entry(const AbelianGroup& g) {
    if (g.trivial()) return "";
    std::ostringstream os;
    if (g.rank != 0) os << g.rank;
    if (!g.torsion.empty()) {
        // group prime powers by prime, pad inside each ladder
        std::map<int64_t, std::map<int, int64_t>> ladders; // prime -> exponent -> mult
        for (const auto& [pk, mult] : g.torsion) {
            int64_t p = pk;
            for (int64_t q = 2; q * q <= p; ++q)
                while (p % q == 0 && p != q) p /= q;
            // p is now the prime base of pk
            int e = 0;
            int64_t v = pk;
            while (v > 1) {
                v /= p;
                ++e;
            }
            ladders[p][e] = mult;
        }
        os << '[';
        bool first = true;
        for (const auto& [p, lad] : ladders) {
            int top = lad.rbegin()->first;
            for (int e = 1; e <= top; ++e) {
                if (!first) os << ',';
                first = false;
                auto it = lad.find(e);
                os << (it == lad.end() ? 0 : it->second);
            }
        }
        os << ']';
    }
    return os.str();
}

AbelianGroup parse_group_entry(const std::string& text) {
    AbelianGroup g;
    size_t br = text.find('[');
    std::string rank_part = text.substr(0, br);
    if (!rank_part.empty()) g.rank = std::stoll(rank_part);
    if (br == std::string::npos) return g;
    size_t end = text.find(']', br);
    if (end == std::string::npos) throw InvariantError("unterminated torsion bracket");
    std::string inner = text.substr(br + 1, end - br - 1);
    std::istringstream is(inner);
    std::string tok;
    int64_t pk = 2;
    while (std::getline(is, tok, ',')) {
        int64_t mult = std::stoll(tok);
        if (mult != 0) g.torsion[pk] = mult;
        pk *= 2; // parser covers the 2-ladder (the common case in tables)
    }
    return g;
}

std::string render_table(const HomologyTable& t, bool with_reduced) {
    std::set<int> is;
    std::set<int> js; // standard j and, interleaved, reduced jt
    for (const auto& [ij, g] : t.groups) {
        is.insert(ij.first);
        js.insert(2 * ij.second); // doubled so reduced rows fit between
    }
    bool reduced = with_reduced && t.reduced.has_value();
    if (reduced) {
        for (const auto& [ij, g] : *t.reduced) {
            is.insert(ij.first);
            js.insert(2 * ij.second - 1); // jt rows sit between main rows
        }
    }
    if (is.empty()) return "(empty table)\n";

    auto entry = [&](int i, int dj) -> std::string {
        if (dj % 2 == 0) {
            auto it = t.groups.find({i, dj / 2});
            return it == t.groups.end() ? "" : group_entry(it->second);
        }
        auto it = t.reduced->find({i, (dj + 1) / 2});
        return it == t.reduced->end() ? "" : group_entry(it->second);
    };

    std::map<int, size_t> width;
    for (int i : is) {
        width[i] = std::to_string(i).size();
        for (int dj : js) width[i] = std::max(width[i], entry(i, dj).size());
    }
    size_t jw = 4;
    for (int dj : js) {
        std::string lbl = dj % 2 == 0 ? std::to_string(dj / 2) : std::to_string((dj + 1) / 2) + "~";
        jw = std::max(jw, lbl.size());
    }

    std::ostringstream os;
    os << std::string(jw, ' ') << " |";
    for (int i : is) os << ' ' << std::string(width[i] - std::to_string(i).size(), ' ') << i;
    os << "\n" << std::string(jw, '-') << "-+";
    size_t total = 0;
    for (int i : is) total += width[i] + 1;
    os << std::string(total, '-') << "\n";
    for (auto dj_it = js.rbegin(); dj_it != js.rend(); ++dj_it) {
        int dj = *dj_it;
        std::string lbl = dj % 2 == 0 ? std::to_string(dj / 2) : std::to_string((dj + 1) / 2) + "~";
        os << std::string(jw - lbl.size(), ' ') << lbl << " |";
        for (int i : is) {
            std::string e = entry(i, dj);
            os << ' ' << std::string(width[i] - e.size(), ' ') << e;
        }
        os << "\n";
    }
    if (reduced) os << "(rows marked ~ carry the reduced homology; their j is the reduced grading)\n";
    return os.str();
}

namespace {

json groups_to_json(const std::map<Bidegree, AbelianGroup>& groups) {
    json arr = json::array();
    for (const auto& [ij, g] : groups) {
        json torsion = json::array();
        for (const auto& [pk, mult] : g.torsion) torsion.push_back({pk, mult});
        arr.push_back({{"i", ij.first}, {"j", ij.second}, {"rank", g.rank}, {"torsion", torsion}});
    }
    return arr;
}

std::map<Bidegree, AbelianGroup> groups_from_json(const json& arr) {
    std::map<Bidegree, AbelianGroup> out;
    for (const auto& e : arr) {
        AbelianGroup g;
        g.rank = e.at("rank").get<int64_t>();
        for (const auto& tk : e.at("torsion")) g.torsion[tk.at(0).get<int64_t>()] = tk.at(1).get<int64_t>();
        out[{e.at("i").get<int>(), e.at("j").get<int>()}] = g;
    }
    return out;
}

} // namespace

std::string record_to_json(const ResultRecord& r) {
    json j;
    j["name"] = r.name;
    j["pd"] = r.pd;
    j["hash"] = r.diagram_hash;
    j["crossings"] = r.n_crossings;
    j["components"] = r.m_components;
    json meta = json::object();
    if (r.table.meta.signature) meta["signature"] = *r.table.meta.signature;
    if (r.table.meta.alternating) meta["alternating"] = *r.table.meta.alternating;
    if (r.table.meta.split) meta["split"] = *r.table.meta.split;
    if (r.table.meta.prime) meta["prime"] = *r.table.meta.prime;
    j["meta"] = meta;
    j["groups"] = groups_to_json(r.table.groups);
    if (r.table.reduced) j["reduced"] = groups_to_json(*r.table.reduced);
    json polys;
    {
        json kh = json::array();
        for (const auto& [k, v] : r.kh.c) kh.push_back({k.first, k.second, v});
        polys["kh"] = kh;
        json kt = json::array();
        for (const auto& [k, v] : r.kh_t.c)
            kt.push_back({std::get<0>(k), std::get<1>(k), std::get<2>(k), v});
        polys["kT"] = kt;
        json K = json::array();
        for (const auto& [k, v] : r.euler.c) K.push_back({k, v});
        polys["K"] = K;
        json J = json::array();
        for (const auto& [k, v] : r.jones.c) J.push_back({k, v});
        polys["J"] = J;
    }
    j["polys"] = polys;
    json cls;
    cls["h_class"] = to_string(r.classification.h_class);
    cls["t_class"] = to_string(r.classification.t_class);
    if (!r.classification.t_reason.empty()) cls["t_reason"] = r.classification.t_reason;
    cls["diagonals"] = json(std::vector<int>(r.classification.diagonal_support.begin(),
                                             r.classification.diagonal_support.end()));
    if (r.classification.s_value) cls["s"] = *r.classification.s_value;
    if (r.classification.knight_poly) {
        json kp = json::array();
        for (const auto& [k, v] : r.classification.knight_poly->c)
            kp.push_back({k.first, k.second, v});
        cls["kh_prime"] = kp;
    }
    json mpt = json::object();
    for (const auto& [p, thin] : r.classification.mod_p_thin) mpt[std::to_string(p)] = thin;
    cls["mod_p_thin"] = mpt;
    cls["outside_stated_scope"] = r.classification.outside_stated_scope;
    j["classification"] = cls;
    j["timing_ms"] = r.timing_ms;
    return j.dump(1);
}

ResultRecord record_from_json(const std::string& text) {
    json j = json::parse(text);
    ResultRecord r;
    r.name = j.at("name").get<std::string>();
    r.pd = j.at("pd").get<std::string>();
    r.diagram_hash = j.at("hash").get<uint64_t>();
    r.n_crossings = j.at("crossings").get<int>();
    r.m_components = j.at("components").get<int>();
    if (j.at("meta").contains("signature")) r.table.meta.signature = j["meta"]["signature"].get<int>();
    if (j.at("meta").contains("alternating")) r.table.meta.alternating = j["meta"]["alternating"].get<bool>();
    if (j.at("meta").contains("split")) r.table.meta.split = j["meta"]["split"].get<bool>();
    if (j.at("meta").contains("prime")) r.table.meta.prime = j["meta"]["prime"].get<bool>();
    r.table.groups = groups_from_json(j.at("groups"));
    r.table.m_components = r.m_components;
    if (j.contains("reduced")) r.table.reduced = groups_from_json(j["reduced"]);
    for (const auto& e : j.at("polys").at("kh"))
        r.kh.add(e.at(0).get<int>(), e.at(1).get<int>(), e.at(2).get<int64_t>());
    for (const auto& e : j.at("polys").at("kT"))
        r.kh_t.c[{e.at(0).get<int>(), e.at(1).get<int64_t>(), e.at(2).get<int>()}] = e.at(3).get<int64_t>();
    for (const auto& e : j.at("polys").at("K")) r.euler.add(e.at(0).get<int>(), e.at(1).get<int64_t>());
    for (const auto& e : j.at("polys").at("J")) r.jones.add(e.at(0).get<int>(), e.at(1).get<int64_t>());
    const json& cls = j.at("classification");
    auto hs = cls.at("h_class").get<std::string>();
    r.classification.h_class = hs == "H-slim" ? HClass::H_slim
                             : hs == "H-thin" ? HClass::H_thin
                                              : HClass::H_thick;
    auto ts = cls.at("t_class").get<std::string>();
    r.classification.t_class = ts == "T-thin"    ? TClass::T_thin
                               : ts == "WT-thin" ? TClass::WT_thin
                               : ts == "T-rich"  ? TClass::T_rich
                                                 : TClass::T_thick;
    if (cls.contains("t_reason")) r.classification.t_reason = cls["t_reason"].get<std::string>();
    for (const auto& b : cls.at("diagonals")) r.classification.diagonal_support.insert(b.get<int>());
    if (cls.contains("s")) r.classification.s_value = cls["s"].get<int>();
    if (cls.contains("kh_prime")) {
        BigradedPoly kp;
        for (const auto& e : cls["kh_prime"])
            kp.add(e.at(0).get<int>(), e.at(1).get<int>(), e.at(2).get<int64_t>());
        r.classification.knight_poly = kp;
    }
    for (const auto& [key, val] : cls.at("mod_p_thin").items())
        r.classification.mod_p_thin[std::stoll(key)] = val.get<bool>();
    r.classification.outside_stated_scope = cls.at("outside_stated_scope").get<bool>();
    r.timing_ms = j.at("timing_ms").get<int64_t>();
    return r;
}

namespace {

std::string sanitized(const std::string& name) {
    std::string out;
    for (char c : name)
        out += (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-') ? c : '_';
    return out;
}

std::string record_path(const std::string& dir, const std::string& name) {
    return dir + "/" + sanitized(name) + ".json";
}

} // namespace

void store_write(const std::string& dir, const ResultRecord& r) {
    std::filesystem::create_directories(dir);
    std::string path = record_path(dir, r.name);
    std::string tmp = path + ".tmp";
    {
        std::ofstream os(tmp);
        os << record_to_json(r) << "\n";
    }
    std::filesystem::rename(tmp, path);
}

bool store_has(const std::string& dir, const std::string& name, uint64_t diagram_hash) {
    std::string path = record_path(dir, name);
    std::ifstream is(path);
    if (!is) return false;
    try {
        std::stringstream ss;
        ss << is.rdbuf();
        ResultRecord r = record_from_json(ss.str());
        return r.diagram_hash == diagram_hash;
    } catch (...) {
        return false;
    }
}

ResultRecord store_read(const std::string& dir, const std::string& name) {
    std::ifstream is(record_path(dir, name));
    if (!is) throw InvariantError("no stored record for " + name);
    std::stringstream ss;
    ss << is.rdbuf();
    return record_from_json(ss.str());
}

void store_write_index(const std::string& dir, const std::vector<ResultRecord>& records) {
    std::filesystem::create_directories(dir);
    std::ofstream os(dir + "/index.csv");
    os << "name,crossings,h_class,t_class,total_rank,torsion_orders,determinant\n";
    for (const ResultRecord& r : records) {
        std::set<int64_t> orders;
        for (const auto& [ij, g] : r.table.groups)
            for (const auto& [pk, mult] : g.torsion) orders.insert(pk);
        std::ostringstream ord;
        bool first = true;
        for (int64_t pk : orders) {
            if (!first) ord << ' ';
            first = false;
            ord << pk;
        }
        os << r.name << ',' << r.n_crossings << ',' << to_string(r.classification.h_class) << ','
           << to_string(r.classification.t_class) << ',' << r.table.total_rank() << ','
           << ord.str() << ',' << determinant(r.jones) << "\n";
    }
}

std::string classification_line(const ResultRecord& r) {
    std::ostringstream os;
    os << r.name << ": " << to_string(r.classification.h_class) << ", "
       << to_string(r.classification.t_class);
    if (r.classification.outside_stated_scope) os << " (outside paper's stated scope)";
    if (r.classification.s_value) os << "; s = " << *r.classification.s_value;
    if (r.classification.knight_poly) os << "; Kh' = " << r.classification.knight_poly->to_string();
    if (!r.classification.t_reason.empty()) os << "; note: " << r.classification.t_reason;
    return os.str();
}

} // namespace kh
