#include "spatnet/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>
#include <tuple>

#include <json.hpp>

#include "spatnet/community.hpp"
#include "spatnet/csv.hpp"
#include "spatnet/error.hpp"
#include "spatnet/null_models.hpp"
#include "spatnet/random.hpp"
#include "spatnet/stats.hpp"

namespace spatnet {

using nlohmann::json;

std::string_view to_string(Variant variant) {
    switch (variant) {
        case Variant::original: return "original";
        case Variant::rewired: return "rewired";
        case Variant::relocated: return "relocated";
    }
    return "original";
}

Variant parse_variant(std::string_view text) {
    if (text == "original") return Variant::original;
    if (text == "rewired" || text == "rewire") return Variant::rewired;
    if (text == "relocated" || text == "relocate") return Variant::relocated;
    throw ContractError("unknown variant '" + std::string(text) +
                        "' (expected original|rewired|relocated)");
}

namespace {

std::size_t integer_sqrt(std::size_t n) {
    auto r = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(n))));
    while (r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r;
}

bool is_square(std::size_t n) {
    const auto r = integer_sqrt(n);
    return r * r == n;
}

template <typename T>
void require_unique(const std::vector<T>& items, const char* what) {
    std::set<T> seen(items.begin(), items.end());
    if (seen.size() != items.size()) {
        throw ContractError(std::string("config: duplicate entries in ") + what);
    }
}

template <typename T>
void require_nonempty(const std::vector<T>& items, const char* what) {
    if (items.empty()) throw ContractError(std::string("config: ") + what + " must not be empty");
}

}  // namespace

void validate(const ExperimentConfig& config) {
    require_nonempty(config.placements, "placements");
    require_nonempty(config.kinds, "kinds");
    require_nonempty(config.sizes, "sizes");
    require_nonempty(config.attacks, "attacks");
    require_nonempty(config.seeds, "seeds");
    require_unique(config.placements, "placements");
    require_unique(config.kinds, "kinds");
    require_unique(config.sizes, "sizes");
    require_unique(config.attacks, "attacks");
    require_unique(config.null_models, "null_models");
    require_unique(config.seeds, "seeds");

    for (auto p : config.placements) {
        if (p == Placement::external) {
            throw ContractError("config: placement 'external' cannot be used in an experiment");
        }
    }
    for (auto v : config.null_models) {
        if (v == Variant::original) {
            throw ContractError("config: null_models lists 'original', which always runs");
        }
    }
    const bool needs_square =
        std::find(config.placements.begin(), config.placements.end(), Placement::lattice) !=
            config.placements.end() ||
        std::find(config.null_models.begin(), config.null_models.end(), Variant::relocated) !=
            config.null_models.end();
    for (auto n : config.sizes) {
        if (n < 3) throw ContractError("config: size " + std::to_string(n) + " below 3");
        if (needs_square && !is_square(n)) {
            throw ContractError("config: size " + std::to_string(n) +
                                " is not a perfect square, required by lattice/relocate");
        }
    }
    if (config.rf_trials == 0) throw ContractError("config: rf_trials must be at least 1");
    if (!config.mesh.path) {
        const auto& s = config.mesh.synthesis;
        if (s.rows == 0 || s.cols == 0) throw ContractError("config: mesh synthesis needs rows, cols > 0");
        if (!(s.cell_size > 0.0)) throw ContractError("config: mesh cell_size must be positive");
        if (!(s.decay_rate >= 0.0)) throw ContractError("config: mesh decay_rate must be >= 0");
    }
}

// ---------------------------------------------------------------------------
// JSON

namespace {

template <typename T, typename Fmt>
json string_list(const std::vector<T>& items, Fmt fmt) {
    json out = json::array();
    for (const auto& item : items) out.push_back(std::string(fmt(item)));
    return out;
}

template <typename T, typename Parse>
std::vector<T> parse_list(const json& node, const char* field, Parse parse) {
    if (!node.is_array()) throw ContractError(std::string("config: ") + field + " must be an array");
    std::vector<T> out;
    for (const auto& item : node) {
        if (!item.is_string()) {
            throw ContractError(std::string("config: ") + field + " entries must be strings");
        }
        out.push_back(parse(item.get<std::string>()));
    }
    return out;
}

json synthesis_to_json(const MeshSynthesis& s) {
    return json{{"rows", s.rows},
                {"cols", s.cols},
                {"cell_size", s.cell_size},
                {"total_population", s.total_population},
                {"decay_rate", s.decay_rate},
                {"seed", s.seed},
                {"scatter", std::string(to_string(s.scatter))},
                {"centers", s.centers},
                {"jitter", s.jitter}};
}

void check_keys(const json& node, std::initializer_list<const char*> allowed, const char* where) {
    for (const auto& [key, value] : node.items()) {
        if (std::none_of(allowed.begin(), allowed.end(),
                         [&](const char* a) { return key == a; })) {
            throw ContractError(std::string("config: unknown field '") + key + "' in " + where);
        }
    }
}

MeshSynthesis synthesis_from_json(const json& node) {
    check_keys(node,
               {"rows", "cols", "cell_size", "total_population", "decay_rate", "seed", "scatter",
                "centers", "jitter"},
               "mesh.synthesis");
    MeshSynthesis s;
    if (node.contains("rows")) s.rows = node.at("rows").get<std::size_t>();
    if (node.contains("cols")) s.cols = node.at("cols").get<std::size_t>();
    if (node.contains("cell_size")) s.cell_size = node.at("cell_size").get<double>();
    if (node.contains("total_population")) {
        s.total_population = node.at("total_population").get<std::uint64_t>();
    }
    if (node.contains("decay_rate")) s.decay_rate = node.at("decay_rate").get<double>();
    if (node.contains("seed")) s.seed = node.at("seed").get<std::uint64_t>();
    if (node.contains("scatter")) s.scatter = parse_scatter_model(node.at("scatter").get<std::string>());
    if (node.contains("centers")) s.centers = node.at("centers").get<std::size_t>();
    if (node.contains("jitter")) s.jitter = node.at("jitter").get<double>();
    return s;
}

}  // namespace

std::string config_to_json(const ExperimentConfig& config) {
    json mesh{{"synthesis", synthesis_to_json(config.mesh.synthesis)}};
    if (config.mesh.path) mesh["path"] = config.mesh.path->generic_string();
    json doc{
        {"placements", string_list(config.placements, [](Placement p) { return to_string(p); })},
        {"kinds", string_list(config.kinds, [](ProximityRule r) { return to_string(r); })},
        {"sizes", config.sizes},
        {"attacks", string_list(config.attacks, [](AttackKind a) { return to_string(a); })},
        {"null_models", string_list(config.null_models, [](Variant v) { return to_string(v); })},
        {"seeds", config.seeds},
        {"mesh", mesh},
        {"rewire_swaps_per_edge", config.rewire_swaps_per_edge},
        {"rf_trials", config.rf_trials},
        {"q_normalization", std::string(to_string(config.q_normalization))},
        {"uniform_snap", config.uniform_snap},
        {"write_curves", config.write_curves},
        {"threads", config.threads},
        {"output", config.output.generic_string()},
    };
    return doc.dump(2) + "\n";
}

ExperimentConfig config_from_json(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ContractError(std::string("config: malformed JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ContractError("config: top level must be an object");

    ExperimentConfig c;
    try {
        check_keys(doc,
                   {"placements", "kinds", "sizes", "attacks", "null_models", "seeds", "mesh",
                    "rewire_swaps_per_edge", "rf_trials", "q_normalization", "uniform_snap",
                    "write_curves", "threads", "output"},
                   "config");
        if (doc.contains("placements")) {
            c.placements = parse_list<Placement>(doc["placements"], "placements", parse_placement);
        }
        if (doc.contains("kinds")) {
            c.kinds = parse_list<ProximityRule>(doc["kinds"], "kinds", parse_proximity_rule);
        }
        if (doc.contains("sizes")) c.sizes = doc["sizes"].get<std::vector<std::size_t>>();
        if (doc.contains("attacks")) {
            c.attacks = parse_list<AttackKind>(doc["attacks"], "attacks", parse_attack_kind);
        }
        if (doc.contains("null_models")) {
            c.null_models = parse_list<Variant>(doc["null_models"], "null_models", parse_variant);
        }
        if (doc.contains("seeds")) c.seeds = doc["seeds"].get<std::vector<std::uint64_t>>();
        if (doc.contains("mesh")) {
            const auto& mesh = doc["mesh"];
            check_keys(mesh, {"path", "synthesis"}, "mesh");
            if (mesh.contains("path")) c.mesh.path = mesh["path"].get<std::string>();
            if (mesh.contains("synthesis")) c.mesh.synthesis = synthesis_from_json(mesh["synthesis"]);
        }
        if (doc.contains("rewire_swaps_per_edge")) {
            c.rewire_swaps_per_edge = doc["rewire_swaps_per_edge"].get<std::size_t>();
        }
        if (doc.contains("rf_trials")) c.rf_trials = doc["rf_trials"].get<std::size_t>();
        if (doc.contains("q_normalization")) {
            c.q_normalization = parse_q_normalization(doc["q_normalization"].get<std::string>());
        }
        if (doc.contains("uniform_snap")) c.uniform_snap = doc["uniform_snap"].get<bool>();
        if (doc.contains("write_curves")) c.write_curves = doc["write_curves"].get<bool>();
        if (doc.contains("threads")) c.threads = doc["threads"].get<std::size_t>();
        if (doc.contains("output")) c.output = doc["output"].get<std::string>();
    } catch (const json::exception& e) {
        throw ContractError(std::string("config: ") + e.what());
    }
    return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ContractError("cannot open config " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    return config_from_json(buffer.str());
}

// ---------------------------------------------------------------------------
// Grid

std::string key_label(const RecordKey& key) {
    std::string out;
    out += to_string(key.placement);
    out += '_';
    out += to_string(key.kind);
    out += "_n" + std::to_string(key.n) + '_';
    out += to_string(key.attack);
    out += '_';
    out += to_string(key.variant);
    out += "_s" + std::to_string(key.seed);
    return out;
}

std::uint64_t derive_seed(std::uint64_t config_seed, std::string_view purpose,
                          std::string_view key_fields) {
    std::string text = std::to_string(config_seed);
    text += '|';
    text += purpose;
    text += '|';
    text += key_fields;
    return stable_hash(text);
}

std::vector<RecordKey> expand_grid(const ExperimentConfig& config) {
    std::vector<Variant> variants{Variant::original};
    variants.insert(variants.end(), config.null_models.begin(), config.null_models.end());
    std::vector<RecordKey> keys;
    for (auto placement : config.placements)
        for (auto kind : config.kinds)
            for (auto n : config.sizes)
                for (auto attack : config.attacks)
                    for (auto variant : variants)
                        for (auto seed : config.seeds)
                            keys.push_back({placement, kind, n, attack, variant, seed});
    std::sort(keys.begin(), keys.end());
    return keys;
}

namespace {

std::string fields(std::initializer_list<std::string_view> parts) {
    std::string out;
    for (auto p : parts) {
        if (!out.empty()) out += '|';
        out += p;
    }
    return out;
}

PointSet cell_points(const ExperimentConfig& config, const RecordKey& key) {
    const auto n_text = std::to_string(key.n);
    const auto point_seed =
        derive_seed(key.seed, "points", fields({to_string(key.placement), n_text}));

    if (key.placement == Placement::lattice) return lattice_points(integer_sqrt(key.n));

    auto mesh_for_key = [&]() {
        if (config.mesh.path) return load_mesh(*config.mesh.path);
        auto spec = config.mesh.synthesis;
        spec.seed = derive_seed(key.seed, "mesh", std::to_string(spec.seed));
        return synthesize_mesh(spec);
    };

    switch (key.placement) {
        case Placement::population: return place_population(mesh_for_key(), key.n);
        case Placement::inverse: return place_inverse(mesh_for_key(), key.n);
        case Placement::uniform: {
            if (config.uniform_snap) return place_uniform_centers(mesh_for_key(), key.n, point_seed);
            if (config.mesh.path) return place_uniform(mesh_for_key().bounds(), key.n, point_seed);
            const auto& s = config.mesh.synthesis;
            const BoundingBox region{0.0, 0.0, static_cast<double>(s.cols) * s.cell_size,
                                     static_cast<double>(s.rows) * s.cell_size};
            return place_uniform(region, key.n, point_seed);
        }
        default: break;
    }
    throw ContractError("placement '" + std::string(to_string(key.placement)) +
                        "' unsupported in experiments");
}

}  // namespace

CellOutput run_cell(const ExperimentConfig& config, const RecordKey& key) {
    const auto points = cell_points(config, key);
    Graph g = build_proximity_graph(points, key.kind);

    const auto net = fields({to_string(key.placement), to_string(key.kind), std::to_string(key.n)});
    if (key.variant == Variant::rewired) {
        g = rewire_degree_preserving(
            g, {config.rewire_swaps_per_edge, derive_seed(key.seed, "rewire", net)});
    } else if (key.variant == Variant::relocated) {
        g = relocate_to_lattice(g, {integer_sqrt(key.n), derive_seed(key.seed, "relocate", net)});
    }
    const auto variant_net = net + '|' + std::string(to_string(key.variant));

    CellOutput out;
    out.record.key = key;
    auto& m = out.record.metrics;
    m.avg_degree = average_degree(g);
    const auto communities = louvain(g, derive_seed(key.seed, "louvain", variant_net));
    m.modularity = modularity(g, communities.partition);
    m.community_count = communities.partition.community_count;
    m.sparsity = sparsity_index(g);
    m.grid_ratio = grid_like_ratio(g);

    const auto attack_seed = derive_seed(key.seed, "rf", variant_net);
    if (key.attack == AttackKind::rf && config.rf_trials > 1) {
        out.curve = average_random_failures(g, attack_seed, config.rf_trials);
    } else {
        out.curve = run_attack(g, {key.attack, attack_seed});
    }
    m.robustness = robustness_index(out.curve);
    const auto qc = critical_fraction(out.curve, config.q_normalization);
    m.critical_fraction = qc.q;
    m.qc_degenerate = qc.degenerate;
    return out;
}

// ---------------------------------------------------------------------------
// Outputs

namespace {

void key_columns(std::ostream& out, const RecordKey& k) {
    out << to_string(k.placement) << ',' << to_string(k.kind) << ',' << k.n << ','
        << to_string(k.attack) << ',' << to_string(k.variant) << ',' << k.seed;
}

constexpr const char* kKeyHeader = "placement,kind,n,attack,variant,seed";

std::string scatter_csv(const std::vector<ResultRecord>& records, const char* x_name,
                        double Metrics::*x, const char* y_name, double Metrics::*y) {
    std::ostringstream out;
    out << kKeyHeader << ',' << x_name << ',' << y_name << '\n';
    for (const auto& r : records) {
        key_columns(out, r.key);
        out << ',' << csv::format_double(r.metrics.*x) << ',' << csv::format_double(r.metrics.*y)
            << '\n';
    }
    return out.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ContractError("cannot write " + path.string());
    out << text;
}

json correlation_json(std::span<const double> x, std::span<const double> y) {
    try {
        const auto c = stats::pearson(x, y);
        return json{{"r", c.r}, {"p", c.p}, {"n", c.n}};
    } catch (const std::exception& e) {
        return json{{"n", x.size()}, {"undefined", e.what()}};
    }
}

std::string summarize(const ExperimentConfig& config, const std::vector<ResultRecord>& records,
                      const std::vector<FailedCell>& failed, std::size_t cell_count) {
    json doc;
    doc["cells"] = cell_count;
    doc["succeeded"] = records.size();
    doc["q_normalization"] = std::string(to_string(config.q_normalization));

    json fails = json::array();
    for (const auto& f : failed) fails.push_back({{"key", key_label(f.key)}, {"error", f.error}});
    doc["failed"] = fails;

    json degenerate = json::array();
    for (const auto& r : records) {
        if (r.metrics.qc_degenerate) degenerate.push_back(key_label(r.key));
    }
    doc["degenerate_qc"] = degenerate;

    // Means per (placement, kind, n, attack, variant) across seeds.
    struct Acc {
        double r = 0, qc = 0, q = 0, si = 0, k = 0;
        std::size_t count = 0;
    };
    using GroupKey = std::tuple<Placement, ProximityRule, std::size_t, AttackKind, Variant>;
    std::map<GroupKey, Acc> groups;
    for (const auto& rec : records) {
        auto& a = groups[{rec.key.placement, rec.key.kind, rec.key.n, rec.key.attack, rec.key.variant}];
        a.r += rec.metrics.robustness;
        a.qc += rec.metrics.critical_fraction;
        a.q += rec.metrics.modularity;
        a.si += rec.metrics.sparsity;
        a.k += rec.metrics.avg_degree;
        ++a.count;
    }
    json means = json::array();
    for (const auto& [gk, a] : groups) {
        const double c = static_cast<double>(a.count);
        means.push_back({{"placement", std::string(to_string(std::get<0>(gk)))},
                         {"kind", std::string(to_string(std::get<1>(gk)))},
                         {"n", std::get<2>(gk)},
                         {"attack", std::string(to_string(std::get<3>(gk)))},
                         {"variant", std::string(to_string(std::get<4>(gk)))},
                         {"count", a.count},
                         {"R", a.r / c},
                         {"qc", a.qc / c},
                         {"Q", a.q / c},
                         {"SI", a.si / c},
                         {"avg_degree", a.k / c}});
    }
    doc["means"] = means;

    // Correlations and ANOVA per (kind, n, attack), pooling placements and variants.
    using SliceKey = std::tuple<ProximityRule, std::size_t, AttackKind>;
    std::map<SliceKey, std::vector<const ResultRecord*>> slices;
    for (const auto& rec : records) slices[{rec.key.kind, rec.key.n, rec.key.attack}].push_back(&rec);
    json correlations = json::array();
    json anovas = json::array();
    for (const auto& [sk, recs] : slices) {
        std::vector<double> q, r, si;
        for (const auto* rec : recs) {
            q.push_back(rec->metrics.modularity);
            r.push_back(rec->metrics.robustness);
            si.push_back(rec->metrics.sparsity);
        }
        json entry{{"kind", std::string(to_string(std::get<0>(sk)))},
                   {"n", std::get<1>(sk)},
                   {"attack", std::string(to_string(std::get<2>(sk)))}};
        entry["Q_R"] = correlation_json(q, r);
        entry["SI_R"] = correlation_json(si, r);
        entry["SI_Q"] = correlation_json(si, q);
        correlations.push_back(entry);

        std::map<std::pair<Placement, Variant>, stats::Sample> by_placement;
        for (const auto* rec : recs) {
            if (rec->key.variant != Variant::original) continue;
            auto& s = by_placement[{rec->key.placement, rec->key.variant}];
            s.label = std::string(to_string(rec->key.placement));
            s.values.push_back(rec->metrics.robustness);
        }
        std::vector<stats::Sample> samples;
        for (auto& [pk, s] : by_placement) samples.push_back(std::move(s));
        json anova{{"kind", entry["kind"]}, {"n", entry["n"]}, {"attack", entry["attack"]},
                   {"metric", "R"}};
        try {
            const auto a = stats::anova_oneway(samples);
            anova["f"] = a.infinite_f ? json("inf") : json(a.f);
            anova["p"] = a.p;
            anova["eta_squared"] = a.eta_squared;
            anova["df_between"] = a.df_between;
            anova["df_within"] = a.df_within;
        } catch (const std::exception& e) {
            anova["undefined"] = e.what();
        }
        anovas.push_back(anova);
    }
    doc["correlations"] = correlations;
    doc["anova"] = anovas;
    return doc.dump(2) + "\n";
}

}  // namespace

std::string results_csv(const std::vector<ResultRecord>& records) {
    std::ostringstream out;
    out << kResultsHeader << '\n';
    for (const auto& r : records) {
        const auto& m = r.metrics;
        key_columns(out, r.key);
        out << ',' << csv::format_double(m.robustness) << ','
            << csv::format_double(m.critical_fraction) << ',' << csv::format_double(m.modularity)
            << ',' << csv::format_double(m.sparsity) << ',' << csv::format_double(m.grid_ratio)
            << ',' << csv::format_double(m.avg_degree) << ',' << m.community_count << '\n';
    }
    return out.str();
}

ExperimentSummary run_experiment(const ExperimentConfig& config) {
    validate(config);
    const auto keys = expand_grid(config);
    const auto curve_dir = config.output / "curves";
    std::filesystem::create_directories(config.output);
    if (config.write_curves) std::filesystem::create_directories(curve_dir);

    std::vector<std::optional<ResultRecord>> results(keys.size());
    std::vector<std::string> errors(keys.size());
    std::atomic<std::size_t> next{0};

    auto worker = [&]() {
        for (std::size_t i = next++; i < keys.size(); i = next++) {
            try {
                auto cell = run_cell(config, keys[i]);
                if (config.write_curves) {
                    std::ostringstream text;
                    write_curve(text, cell.curve, config.q_normalization);
                    write_text(curve_dir / (key_label(keys[i]) + ".csv"), text.str());
                }
                results[i] = std::move(cell.record);
            } catch (const std::exception& e) {
                errors[i] = e.what();
            }
        }
    };

    std::size_t threads = config.threads;
    if (threads == 0) threads = std::max(1U, std::thread::hardware_concurrency());
    threads = std::min(threads, std::max<std::size_t>(keys.size(), 1));
    std::vector<std::thread> pool;
    for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    ExperimentSummary summary;
    for (std::size_t i = 0; i < keys.size(); ++i) {
        if (results[i]) {
            summary.records.push_back(*results[i]);
        } else {
            summary.failed.push_back({keys[i], errors[i]});
        }
    }
    summary.summary_json = summarize(config, summary.records, summary.failed, keys.size());

    write_text(config.output / "results.csv", results_csv(summary.records));
    write_text(config.output / "scatter_q_r.csv",
               scatter_csv(summary.records, "Q", &Metrics::modularity, "R", &Metrics::robustness));
    write_text(config.output / "scatter_si_r.csv",
               scatter_csv(summary.records, "SI", &Metrics::sparsity, "R", &Metrics::robustness));
    write_text(config.output / "scatter_si_q.csv",
               scatter_csv(summary.records, "SI", &Metrics::sparsity, "Q", &Metrics::modularity));
    write_text(config.output / "summary.json", summary.summary_json);
    return summary;
}

}  // namespace spatnet
