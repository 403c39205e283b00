#include "sdiff/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <system_error>

namespace sdiff {

using nlohmann::json;

namespace {

std::string shortest(double x) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
    if (ec != std::errc{}) throw std::runtime_error("cannot format number");
    return std::string(buf, end);
}

const json& require(const json& j, const char* key, const std::string& where) {
    if (!j.is_object()) throw ParseError("expected an object", 0, where);
    auto it = j.find(key);
    if (it == j.end()) throw ParseError("missing field", 0, where.empty() ? key : where + "." + key);
    return *it;
}

double number_at(const json& j, const std::string& where) {
    if (!j.is_number()) throw ParseError("expected a number", 0, where);
    return j.get<double>();
}

std::uint64_t index_at(const json& j, const std::string& where) {
    if (!j.is_number_integer() || j.get<std::int64_t>() < 0) {
        throw ParseError("expected a nonnegative integer", 0, where);
    }
    return j.get<std::uint64_t>();
}

json time_to_json(double t) { return std::isfinite(t) ? json(t) : json(nullptr); }

double time_from_json(const json& j, const std::string& where) {
    if (j.is_null()) return kInfinity;
    return number_at(j, where);
}

// Reads whitespace-separated tokens with line tracking.
class LineReader {
public:
    explicit LineReader(std::istream& in) : in_(in) {}

    // Next non-blank line not starting with `comment`; false at EOF.
    bool next(std::istringstream& out, char comment = '\0') {
        std::string line;
        while (std::getline(in_, line)) {
            ++line_;
            auto first = line.find_first_not_of(" \t\r");
            if (first == std::string::npos) continue;
            if (comment != '\0' && line[first] == comment) continue;
            out.clear();
            out.str(line);
            return true;
        }
        return false;
    }

    std::size_t line() const noexcept { return line_; }

private:
    std::istream& in_;
    std::size_t line_ = 0;
};

template <typename T>
T token(std::istringstream& is, std::size_t line, const char* field) {
    T value{};
    if (!(is >> value)) throw ParseError("expected a value", line, field);
    return value;
}

std::string extension_of(const std::filesystem::path& path) {
    std::string ext = path.extension().string();
    for (char& c : ext) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return ext;
}

}  // namespace

json network_to_json(const InfluenceNetwork& net) {
    json j;
    j["n"] = net.size();
    bool any_external = false;
    for (double d : net.external()) any_external = any_external || d != 0.0;
    if (any_external) j["external"] = std::vector<double>(net.external().begin(), net.external().end());
    json edges = json::array();
    for (const Edge& e : net.edges()) edges.push_back({{"u", e.u}, {"v", e.v}, {"wuv", e.w_uv}, {"wvu", e.w_vu}});
    j["edges"] = std::move(edges);
    return j;
}

InfluenceNetwork network_from_json(const json& j) {
    const std::size_t n = index_at(require(j, "n", ""), "n");
    std::vector<double> external;
    if (auto it = j.find("external"); it != j.end()) {
        if (!it->is_array()) throw ParseError("expected an array", 0, "external");
        for (std::size_t i = 0; i < it->size(); ++i) {
            external.push_back(number_at((*it)[i], "external[" + std::to_string(i) + "]"));
        }
        if (external.size() != n) {
            throw ParseError("expected " + std::to_string(n) + " entries", 0, "external");
        }
    }
    const json& edges = require(j, "edges", "");
    if (!edges.is_array()) throw ParseError("expected an array", 0, "edges");
    std::vector<Edge> out;
    out.reserve(edges.size());
    for (std::size_t k = 0; k < edges.size(); ++k) {
        const std::string where = "edges[" + std::to_string(k) + "]";
        const json& e = edges[k];
        Edge edge;
        auto u = index_at(require(e, "u", where), where + ".u");
        auto v = index_at(require(e, "v", where), where + ".v");
        if (u >= n) throw ParseError("node id out of range", 0, where + ".u");
        if (v >= n) throw ParseError("node id out of range", 0, where + ".v");
        edge.u = static_cast<NodeId>(u);
        edge.v = static_cast<NodeId>(v);
        edge.w_uv = number_at(require(e, "wuv", where), where + ".wuv");
        edge.w_vu = number_at(require(e, "wvu", where), where + ".wvu");
        out.push_back(edge);
    }
    return InfluenceNetwork(n, std::move(out), std::move(external));
}

std::string network_to_text(const InfluenceNetwork& net) {
    std::ostringstream os;
    os << net.size() << ' ' << net.edge_count() << '\n';
    for (const Edge& e : net.edges()) {
        os << e.u << ' ' << e.v << ' ' << shortest(e.w_uv) << ' ' << shortest(e.w_vu) << '\n';
    }
    return os.str();
}

InfluenceNetwork network_from_text(std::istream& in) {
    LineReader reader(in);
    std::istringstream line;
    if (!reader.next(line, '#')) throw ParseError("missing header line \"n m\"", 1);
    const auto n = token<long long>(line, reader.line(), "n");
    const auto m = token<long long>(line, reader.line(), "m");
    if (n < 0) throw ParseError("negative node count", reader.line(), "n");
    if (m < 0) throw ParseError("negative edge count", reader.line(), "m");
    std::vector<Edge> edges;
    for (long long k = 0; k < m; ++k) {
        if (!reader.next(line, '#')) {
            throw ParseError("expected " + std::to_string(m) + " edge lines, found " + std::to_string(k),
                             reader.line() + 1);
        }
        const auto u = token<long long>(line, reader.line(), "u");
        const auto v = token<long long>(line, reader.line(), "v");
        const auto wuv = token<double>(line, reader.line(), "wuv");
        const auto wvu = token<double>(line, reader.line(), "wvu");
        if (u < 0 || u >= n) throw ParseError("node id out of range", reader.line(), "u");
        if (v < 0 || v >= n) throw ParseError("node id out of range", reader.line(), "v");
        edges.push_back({static_cast<NodeId>(u), static_cast<NodeId>(v), wuv, wvu});
    }
    return InfluenceNetwork(static_cast<std::size_t>(n), std::move(edges));
}

json instance_to_json(const DiffusionInstance& instance) {
    json j = network_to_json(instance.network);
    j["seed"] = instance.seed;
    j["z"] = instance.z;
    j["alpha"] = instance.alpha;
    j["beta"] = instance.beta;
    return j;
}

DiffusionInstance instance_from_json(const json& j) {
    DiffusionInstance instance;
    instance.network = network_from_json(j);
    instance.seed = static_cast<NodeId>(index_at(require(j, "seed", ""), "seed"));
    instance.z = index_at(require(j, "z", ""), "z");
    if (auto it = j.find("alpha"); it != j.end()) instance.alpha = number_at(*it, "alpha");
    if (auto it = j.find("beta"); it != j.end()) instance.beta = number_at(*it, "beta");
    return instance;
}

json decomposition_to_json(const TreeDecomposition& td) {
    json edges = json::array();
    for (auto [a, b] : td.edges) edges.push_back({a, b});
    return {{"root", td.root}, {"bags", td.bags}, {"edges", std::move(edges)}};
}

TreeDecomposition decomposition_from_json(const json& j) {
    TreeDecomposition td;
    if (auto it = j.find("root"); it != j.end()) td.root = index_at(*it, "root");
    const json& bags = require(j, "bags", "");
    if (!bags.is_array()) throw ParseError("expected an array", 0, "bags");
    for (std::size_t b = 0; b < bags.size(); ++b) {
        const std::string where = "bags[" + std::to_string(b) + "]";
        if (!bags[b].is_array()) throw ParseError("expected an array", 0, where);
        std::vector<NodeId> bag;
        for (std::size_t k = 0; k < bags[b].size(); ++k) {
            bag.push_back(static_cast<NodeId>(index_at(bags[b][k], where + "[" + std::to_string(k) + "]")));
        }
        td.bags.push_back(std::move(bag));
    }
    const json& edges = require(j, "edges", "");
    if (!edges.is_array()) throw ParseError("expected an array", 0, "edges");
    for (std::size_t k = 0; k < edges.size(); ++k) {
        const std::string where = "edges[" + std::to_string(k) + "]";
        if (!edges[k].is_array() || edges[k].size() != 2) throw ParseError("expected a pair of bag ids", 0, where);
        td.edges.emplace_back(index_at(edges[k][0], where + "[0]"), index_at(edges[k][1], where + "[1]"));
    }
    return td;
}

std::string decomposition_to_pace(const TreeDecomposition& td, std::size_t node_count) {
    std::ostringstream os;
    std::size_t largest = 0;
    for (const auto& bag : td.bags) largest = std::max(largest, bag.size());
    // Rotate so that the root is bag 1: readers take the first bag as root.
    std::vector<std::size_t> order;
    order.push_back(td.root);
    for (std::size_t b = 0; b < td.bags.size(); ++b) {
        if (b != td.root) order.push_back(b);
    }
    std::vector<std::size_t> renumber(td.bags.size());
    for (std::size_t k = 0; k < order.size(); ++k) renumber[order[k]] = k + 1;
    os << "s td " << td.bags.size() << ' ' << largest << ' ' << node_count << '\n';
    for (std::size_t k = 0; k < order.size(); ++k) {
        os << "b " << k + 1;
        for (NodeId v : td.bags[order[k]]) os << ' ' << v + 1;
        os << '\n';
    }
    for (auto [a, b] : td.edges) os << renumber.at(a) << ' ' << renumber.at(b) << '\n';
    return os.str();
}

TreeDecomposition decomposition_from_pace(std::istream& in) {
    LineReader reader(in);
    std::istringstream line;
    TreeDecomposition td;
    bool header = false;
    std::size_t declared = 0;
    while (reader.next(line, 'c')) {
        std::string head;
        line >> head;
        if (head == "s") {
            std::string kind;
            line >> kind;
            if (kind != "td") throw ParseError("expected \"s td\"", reader.line(), "s");
            declared = token<std::size_t>(line, reader.line(), "bag count");
            token<std::size_t>(line, reader.line(), "bag size");
            token<std::size_t>(line, reader.line(), "node count");
            td.bags.assign(declared, {});
            header = true;
        } else if (head == "b") {
            if (!header) throw ParseError("bag line before the s-line", reader.line());
            const auto id = token<std::size_t>(line, reader.line(), "bag id");
            if (id < 1 || id > declared) throw ParseError("bag id out of range", reader.line(), "bag id");
            long long v = 0;
            while (line >> v) {
                if (v < 1) throw ParseError("node ids are 1-based", reader.line(), "node");
                td.bags[id - 1].push_back(static_cast<NodeId>(v - 1));
            }
            if (!line.eof()) throw ParseError("expected a node id", reader.line(), "node");
        } else {
            if (!header) throw ParseError("edge line before the s-line", reader.line());
            std::istringstream edge(line.str());
            const auto a = token<std::size_t>(edge, reader.line(), "bag a");
            const auto b = token<std::size_t>(edge, reader.line(), "bag b");
            if (a < 1 || a > declared || b < 1 || b > declared) {
                throw ParseError("bag id out of range", reader.line(), "edge");
            }
            td.edges.emplace_back(a - 1, b - 1);
        }
    }
    if (!header) throw ParseError("missing \"s td\" line", reader.line());
    return td;
}

json result_to_json(const SolveResult& result) {
    json steps = json::array();
    for (double t : result.step_times) steps.push_back(time_to_json(t));
    return {{"sequence", result.sequence},
            {"total_time", time_to_json(result.total_time)},
            {"step_times", std::move(steps)},
            {"feasible", result.feasible()}};
}

SolveResult result_from_json(const json& j) {
    SolveResult r;
    const json& seq = require(j, "sequence", "");
    if (!seq.is_array()) throw ParseError("expected an array", 0, "sequence");
    for (std::size_t k = 0; k < seq.size(); ++k) {
        r.sequence.push_back(static_cast<NodeId>(index_at(seq[k], "sequence[" + std::to_string(k) + "]")));
    }
    r.total_time = time_from_json(require(j, "total_time", ""), "total_time");
    const json& steps = require(j, "step_times", "");
    if (!steps.is_array()) throw ParseError("expected an array", 0, "step_times");
    for (std::size_t k = 0; k < steps.size(); ++k) {
        r.step_times.push_back(time_from_json(steps[k], "step_times[" + std::to_string(k) + "]"));
    }
    return r;
}

json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path.string());
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

void write_text_file(const std::filesystem::path& path, const std::string& contents) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << contents;
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

InfluenceNetwork load_network(const std::filesystem::path& path) {
    if (extension_of(path) == ".json") return network_from_json(read_json_file(path));
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path.string());
    return network_from_text(in);
}

void save_network(const InfluenceNetwork& net, const std::filesystem::path& path) {
    if (extension_of(path) == ".json") {
        write_text_file(path, network_to_json(net).dump(2) + "\n");
    } else {
        for (double d : net.external()) {
            if (d != 0.0) throw ValidationError("the text format cannot store external influence; use .json");
        }
        write_text_file(path, network_to_text(net));
    }
}

DiffusionInstance load_instance(const std::filesystem::path& path) {
    return instance_from_json(read_json_file(path));
}

void save_instance(const DiffusionInstance& instance, const std::filesystem::path& path) {
    write_text_file(path, instance_to_json(instance).dump(2) + "\n");
}

TreeDecomposition load_decomposition(const std::filesystem::path& path) {
    if (extension_of(path) == ".json") return decomposition_from_json(read_json_file(path));
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path.string());
    return decomposition_from_pace(in);
}

void save_decomposition(const TreeDecomposition& td, std::size_t node_count, const std::filesystem::path& path) {
    if (extension_of(path) == ".json") {
        write_text_file(path, decomposition_to_json(td).dump(2) + "\n");
    } else {
        write_text_file(path, decomposition_to_pace(td, node_count));
    }
}

}  // namespace sdiff
