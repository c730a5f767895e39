// kgrag: corpus -> knowledge graph -> retrieval, end to end.
//
// Pipeline order: extract -> build-graph -> induce -> index -> retrieve,
// with eval and stats on the side. Every subcommand reads the same config
// file (per-section), honors KGRAG_GATEWAY_* env overrides, and exits with
// 0 (ok), 1 (usage/config), 2 (gateway failure) or 3 (data format).

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <memory>
#include <nlohmann/json.hpp>

#include "kgrag/eval/mcq.hpp"
#include "kgrag/eval/metrics.hpp"
#include "kgrag/extract/pipeline.hpp"
#include "kgrag/gateway/http.hpp"
#include "kgrag/gateway/mock.hpp"
#include "kgrag/induce/induction.hpp"
#include "kgrag/kg/io.hpp"
#include "kgrag/retrieve/retrieval.hpp"
#include "kgrag/text.hpp"

namespace {

using nlohmann::json;
using namespace kgrag;

constexpr const char* kVersion = "kgrag 0.1.0";

struct GatewayOptions {
    bool mock = false;
    std::string mock_rules;
    std::uint64_t seed = 0;
    int mock_dim = 256;
    std::string url;
};

json load_config(const std::string& path) {
    if (path.empty()) return json::object();
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    json doc = json::parse(in, nullptr, false);
    if (doc.is_discarded() || !doc.is_object()) {
        throw ConfigError("config file is not a JSON object: " + path);
    }
    return doc;
}

json section(const json& config, const std::string& name) {
    if (config.contains(name) && config[name].is_object()) return config[name];
    return json::object();
}

template <typename T>
T value_or(const json& obj, const std::string& key, T fallback) {
    if (obj.contains(key)) return obj[key].get<T>();
    return fallback;
}

std::unique_ptr<Gateway> make_gateway(const GatewayOptions& opts, const json& config) {
    const json gw = section(config, "gateway");
    RetryPolicy retry;
    if (gw.contains("retry")) {
        const json& r = gw["retry"];
        retry.max_attempts = value_or(r, "max_attempts", retry.max_attempts);
        retry.initial_backoff =
            std::chrono::milliseconds(value_or<long long>(r, "initial_backoff_ms", 100));
        retry.backoff_multiplier = value_or(r, "backoff_multiplier", retry.backoff_multiplier);
        retry.timeout = std::chrono::milliseconds(
            value_or<long long>(r, "timeout_ms", retry.timeout.count()));
    }
    if (opts.mock) {
        auto mock = std::make_unique<MockGateway>(opts.seed, opts.mock_dim, retry);
        if (!opts.mock_rules.empty()) mock->load_rules(opts.mock_rules);
        return mock;
    }
    HttpGatewayConfig http;
    http.base_url = value_or(gw, "url", http.base_url);
    http.api_key = value_or(gw, "key", http.api_key);
    http.model = value_or(gw, "model", http.model);
    http.embedding_model = value_or(gw, "embedding_model", http.embedding_model);
    http.answer_start_marker = value_or(gw, "t_start", http.answer_start_marker);
    http.retry = retry;
    http = http_config_from_env(std::move(http));
    if (!opts.url.empty()) http.base_url = opts.url;
    return std::make_unique<HttpGateway>(std::move(http));
}

PipelineConfig extract_config(const json& config) {
    const json e = section(config, "extract");
    PipelineConfig cfg;
    cfg.l_max = value_or(e, "l_max", cfg.l_max);
    cfg.l_inst = value_or(e, "l_inst", cfg.l_inst);
    cfg.batch_size = value_or(e, "batch_size", cfg.batch_size);
    cfg.alpha = value_or(e, "alpha", cfg.alpha);
    cfg.model_output_cap = value_or(e, "model_output_cap", cfg.model_output_cap);
    cfg.t_start = value_or(e, "t_start", cfg.t_start);
    cfg.chat_template = value_or(e, "chat_template", cfg.chat_template);
    cfg.in_flight = value_or(e, "in_flight", cfg.in_flight);
    cfg.max_chunk_lookback = value_or(e, "lookback", cfg.max_chunk_lookback);
    return cfg;
}

InductionConfig induce_config(const json& config) {
    const json i = section(config, "induce");
    InductionConfig cfg;
    cfg.batch_size = value_or(i, "batch_size", cfg.batch_size);
    cfg.n_ctx = value_or(i, "n_ctx", cfg.n_ctx);
    cfg.l_tok = value_or(i, "l_tok", cfg.l_tok);
    cfg.temperature = value_or(i, "temperature", cfg.temperature);
    cfg.top_p = value_or(i, "top_p", cfg.top_p);
    cfg.s_total = value_or(i, "s_total", cfg.s_total);
    cfg.s_slice = value_or(i, "s_slice", cfg.s_slice);
    cfg.n_sample = value_or(i, "n_sample", cfg.n_sample);
    cfg.rng_seed = value_or(i, "rng_seed", cfg.rng_seed);
    cfg.in_flight = value_or(i, "in_flight", cfg.in_flight);
    return cfg;
}

std::uint64_t config_hash(const json& effective) {
    return fnv1a64(effective.dump());
}

// Fills retrieval knobs from the config file's retrieve section; flags the
// user passed explicitly keep precedence.
void apply_retrieve_config(const json& config, CLI::App& sub, ToGConfig& tog,
                           PPRConfig& ppr, LargeKGConfig& large) {
    const json r = section(config, "retrieve");
    const json t = section(r, "tog");
    const json p = section(r, "ppr");
    const json l = section(r, "large");
    auto unset = [&sub](const std::string& flag) { return sub.count(flag) == 0; };

    if (unset("--top-n")) tog.top_n = value_or(t, "top_n", tog.top_n);
    if (unset("--d-max")) tog.d_max = value_or(t, "d_max", tog.d_max);
    if (unset("--initial-nodes")) {
        tog.initial_nodes = value_or(t, "initial_nodes", tog.initial_nodes);
    }
    if (unset("--top-n-edges")) {
        ppr.top_n_edges = value_or(p, "top_n_edges", ppr.top_n_edges);
    }
    if (unset("--weight-adjust")) {
        ppr.weight_adjust = value_or(p, "weight_adjust", ppr.weight_adjust);
    }
    if (unset("--damping")) ppr.damping = value_or(p, "damping", ppr.damping);
    if (unset("--top-k")) {
        ppr.top_k_passages = value_or(p, "top_k_passages", ppr.top_k_passages);
    }
    ppr.tolerance = value_or(p, "tolerance", ppr.tolerance);
    ppr.max_iterations = value_or(p, "max_iterations", ppr.max_iterations);
    if (unset("--source-nodes")) {
        large.number_of_source_nodes =
            value_or(l, "number_of_source_nodes", large.number_of_source_nodes);
    }
    if (unset("--sampling-area")) {
        large.sampling_area = value_or(l, "sampling_area", large.sampling_area);
    }
    if (unset("--restart-prob")) {
        large.restart_probability =
            value_or(l, "restart_probability", large.restart_probability);
    }
    if (unset("--top-n-passages")) {
        large.top_n_passages = value_or(l, "top_n_passages", large.top_n_passages);
    }
    large.damping = value_or(l, "damping", large.damping);
}

// --- manifest ---------------------------------------------------------------

json read_manifest(const std::filesystem::path& run_dir) {
    const auto path = run_dir / "manifest.json";
    if (!std::filesystem::exists(path)) return json::object();
    std::ifstream in(path);
    json doc = json::parse(in, nullptr, false);
    return doc.is_object() ? doc : json::object();
}

void write_manifest(const std::filesystem::path& run_dir, const json& manifest) {
    std::filesystem::create_directories(run_dir);
    std::ofstream out(run_dir / "manifest.json", std::ios::trunc);
    out << manifest.dump(2) << '\n';
}

// --- subcommands --------------------------------------------------------------

int cmd_extract(const std::string& corpus_path, const std::string& out_dir,
                const GatewayOptions& gw_opts, const json& config) {
    const PipelineConfig cfg = extract_config(config);
    cfg.validate();

    json effective;
    effective["corpus"] = corpus_path;
    effective["extract"] = section(config, "extract");
    effective["mock"] = gw_opts.mock;
    effective["seed"] = gw_opts.seed;
    const std::uint64_t hash = config_hash(effective);
    const std::string run_id = "run-" + NodeId::derive(NodeKind::Passage,
                                                       std::to_string(hash)).hex().substr(0, 12);

    json manifest = read_manifest(out_dir);
    if (value_or(manifest, "config_hash", std::string{}) == std::to_string(hash) &&
        manifest.contains("stages") && value_or(manifest["stages"], "extract", false)) {
        std::cout << "extract: up to date (manifest " << out_dir << ")\n";
        return 0;
    }

    const std::vector<Document> corpus = read_corpus_jsonl(corpus_path);
    auto gateway = make_gateway(gw_opts, config);
    const ExtractionResult result = run_extraction(corpus, cfg, *gateway);
    serialize_batches(result, cfg.batch_size, out_dir);

    std::size_t off_vocabulary = 0;
    for (const TripleBatch& batch : result.batches) {
        off_vocabulary += count_off_vocabulary(batch);
    }

    json files = json::array();
    for (const auto& entry :
         std::filesystem::recursive_directory_iterator(out_dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".jsonl") {
            files.push_back(std::filesystem::relative(entry.path(), out_dir).string());
        }
    }
    std::sort(files.begin(), files.end());

    manifest["run_id"] = run_id;
    manifest["config_hash"] = std::to_string(hash);
    manifest["stages"] = {{"extract", true}};
    manifest["files"] = files;
    write_manifest(out_dir, manifest);

    std::cout << "extract: " << result.chunks << " chunks, "
              << result.batches.size() << " chunk-stages, " << result.failed
              << " failed, " << off_vocabulary
              << " event-event triples outside the relation vocabulary\n";
    return 0;
}

int cmd_build_graph(const std::string& batches_dir, const std::string& out_path) {
    std::size_t line_errors = 0;
    const std::vector<TripleBatch> batches =
        load_batches(batches_dir, [&line_errors](const BatchLoadError& e) {
            ++line_errors;
            std::cerr << "bad batch line " << e.file.string() << ":" << e.line << ": "
                      << e.message << '\n';
        });
    KnowledgeGraph graph;
    const GraphBuildStats stats = build_graph(batches, graph);
    save_graph(graph, out_path);

    json manifest = read_manifest(std::filesystem::path(batches_dir));
    if (!manifest.empty()) {
        manifest["stages"]["build"] = true;
        write_manifest(batches_dir, manifest);
    }
    std::cout << "build-graph: " << stats.triples << " triples ("
              << stats.rejected << " rejected, " << line_errors
              << " bad lines) -> " << out_path << '\n';
    std::cout << format_stats(graph.stats());
    return 0;
}

int cmd_induce(const std::string& graph_path, const std::string& out_path,
               const std::string& csv_path, const std::string& checkpoint,
               const GatewayOptions& gw_opts, const json& config) {
    KnowledgeGraph graph = load_graph(graph_path);
    auto gateway = make_gateway(gw_opts, config);
    InductionConfig cfg = induce_config(config);
    if (gw_opts.seed != 0 && cfg.rng_seed == 0) cfg.rng_seed = gw_opts.seed;

    std::vector<ConceptRecord> records;
    const InductionStats stats =
        induce_schema(graph, cfg, *gateway, records, checkpoint);
    save_graph(graph, out_path);
    if (!csv_path.empty()) write_concept_csv(records, csv_path);

    std::cout << "induce: " << stats.elements << " elements, " << stats.fallbacks
              << " fallbacks, " << stats.batches << " batches\n";
    const CheckReport report = graph.check();
    std::cout << "graph check: " << (report.ok ? "ok" : "FAILED") << '\n';
    for (const std::string& v : report.violations) std::cerr << "  " << v << '\n';
    return report.ok ? 0 : 3;
}

int cmd_index(const std::string& graph_path, const std::string& out_dir,
              const std::string& targets, const GatewayOptions& gw_opts,
              const json& config) {
    const KnowledgeGraph graph = load_graph(graph_path);
    auto gateway = make_gateway(gw_opts, config);
    std::filesystem::create_directories(out_dir);
    const std::filesystem::path dir(out_dir);
    for (const std::string& target : split(targets, ',')) {
        if (target == "nodes") {
            build_node_index(graph, *gateway).save(dir / "nodes.vidx");
        } else if (target == "edges") {
            build_edge_index(graph, *gateway).save(dir / "edges.vidx");
        } else if (target == "passages") {
            build_passage_index(graph, *gateway).save(dir / "passages.vidx");
        } else {
            throw ConfigError("unknown index target: " + target);
        }
        std::cout << "index: built " << target << '\n';
    }
    return 0;
}

json result_to_json(const std::string& question, const std::string& method,
                    const KnowledgeGraph& graph, const RetrievalResult& result) {
    json j;
    j["question"] = question;
    j["method"] = method;
    if (result.answer) j["answer"] = *result.answer;
    j["passages"] = result.passages;
    j["scores"] = result.scores;
    json paths = json::array();
    for (const Path& path : result.paths) {
        json rendered = json::array();
        for (std::size_t i = 0; i < path.nodes.size(); ++i) {
            rendered.push_back(graph.node(path.nodes[i]).text);
            if (i < path.relations.size()) rendered.push_back(path.relations[i]);
        }
        paths.push_back(std::move(rendered));
    }
    j["paths"] = std::move(paths);
    if (!result.diagnostics.empty()) j["diagnostics"] = result.diagnostics;
    return j;
}

struct RetrieveOptions {
    std::string method = "ppr";
    bool generate_answer = false;
    ToGConfig tog;
    PPRConfig ppr;
    LargeKGConfig large;
    bool hipporag1 = false;
};

RetrievalResult run_one_query(const std::string& question, const KnowledgeGraph& graph,
                              const VectorIndex* nodes, const VectorIndex* edges,
                              const VectorIndex* passages, const RetrieveOptions& opts,
                              Gateway& gateway) {
    if (opts.method == "tog") {
        if (!nodes) throw ConfigError("tog requires a node index");
        return tog_answer(question, graph, *nodes, opts.tog, gateway);
    }
    if (opts.method == "ppr") {
        RetrievalIndexes indexes{nodes, edges, passages};
        PPRConfig cfg = opts.ppr;
        if (opts.hipporag1) cfg.personalization = PPRConfig::Personalization::NerNodes;
        RetrievalResult result = ppr_retrieve(question, graph, indexes, cfg, gateway);
        if (opts.generate_answer && !result.passages.empty()) {
            result.answer =
                generate_answer_from_passages(question, graph, result.passages, gateway);
        }
        return result;
    }
    if (opts.method == "large") {
        if (!nodes) throw ConfigError("large requires a node index");
        RetrievalResult result =
            large_kg_retrieve(question, graph, *nodes, opts.large, gateway);
        if (opts.generate_answer && !result.passages.empty()) {
            result.answer =
                generate_answer_from_passages(question, graph, result.passages, gateway);
        }
        return result;
    }
    throw ConfigError("unknown retrieval method: " + opts.method);
}

int cmd_retrieve(const std::string& graph_path, const std::string& index_dir,
                 const std::string& question, const std::string& questions_path,
                 const std::string& out_path, const RetrieveOptions& opts,
                 const GatewayOptions& gw_opts, const json& config) {
    const KnowledgeGraph graph = load_graph(graph_path);
    auto gateway = make_gateway(gw_opts, config);

    const std::filesystem::path dir(index_dir);
    std::optional<VectorIndex> nodes;
    std::optional<VectorIndex> edges;
    std::optional<VectorIndex> passages;
    if (std::filesystem::exists(dir / "nodes.vidx")) {
        nodes = VectorIndex::load(dir / "nodes.vidx");
    }
    if (std::filesystem::exists(dir / "edges.vidx")) {
        edges = VectorIndex::load(dir / "edges.vidx");
    }
    if (std::filesystem::exists(dir / "passages.vidx")) {
        passages = VectorIndex::load(dir / "passages.vidx");
    }

    std::vector<std::string> questions;
    if (!question.empty()) questions.push_back(question);
    if (!questions_path.empty()) {
        std::ifstream in(questions_path);
        if (!in) throw FormatError("cannot open questions: " + questions_path);
        std::string line;
        while (std::getline(in, line)) {
            if (trim(line).empty()) continue;
            json j = json::parse(line, nullptr, false);
            if (j.is_discarded() || !j.contains("question")) {
                throw FormatError("bad question line in " + questions_path);
            }
            questions.push_back(j["question"].get<std::string>());
        }
    }
    if (questions.empty()) throw ConfigError("no question given");

    std::ofstream out_file;
    std::ostream* out = &std::cout;
    if (!out_path.empty()) {
        out_file.open(out_path, std::ios::trunc);
        if (!out_file) throw FormatError("cannot write results: " + out_path);
        out = &out_file;
    }
    for (const std::string& q : questions) {
        const RetrievalResult result =
            run_one_query(q, graph, nodes ? &*nodes : nullptr, edges ? &*edges : nullptr,
                          passages ? &*passages : nullptr, opts, *gateway);
        *out << result_to_json(q, opts.method, graph, result).dump() << '\n';
    }
    return 0;
}

int cmd_eval_qa(const std::string& input_path, const std::vector<std::size_t>& ks,
                const std::string& report_path) {
    std::ifstream in(input_path);
    if (!in) throw FormatError("cannot open eval input: " + input_path);
    std::size_t n = 0;
    double em_sum = 0.0;
    double f1_sum = 0.0;
    std::map<std::size_t, double> pr_sums;
    std::map<std::size_t, std::size_t> pr_counts;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        json j = json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.contains("prediction") || !j.contains("gold")) {
            throw FormatError("bad eval line " + std::to_string(line_no) + " in " +
                              input_path);
        }
        const std::string prediction = j["prediction"].get<std::string>();
        const auto golds = j["gold"].get<std::vector<std::string>>();
        int best_em = 0;
        double best_f1 = 0.0;
        for (const std::string& gold : golds) {
            best_em = std::max(best_em, exact_match(prediction, gold));
            best_f1 = std::max(best_f1, token_f1(prediction, gold));
        }
        em_sum += best_em;
        f1_sum += best_f1;
        ++n;
        if (j.contains("retrieved") && j.contains("supporting")) {
            const auto retrieved = j["retrieved"].get<std::vector<std::string>>();
            const auto supporting = j["supporting"].get<std::vector<std::string>>();
            if (!supporting.empty()) {
                for (std::size_t k : ks) {
                    pr_sums[k] += pr_at_k(retrieved, supporting, k);
                    pr_counts[k] += 1;
                }
            }
        }
    }
    if (n == 0) throw FormatError("no evaluation records in " + input_path);

    json report;
    report["n"] = n;
    report["em"] = em_sum / static_cast<double>(n);
    report["f1"] = f1_sum / static_cast<double>(n);
    for (std::size_t k : ks) {
        if (pr_counts[k] > 0) {
            report["pr@" + std::to_string(k)] =
                pr_sums[k] / static_cast<double>(pr_counts[k]);
        }
    }
    std::cout << "metric        value\n";
    std::cout << "em            " << report["em"].get<double>() << '\n';
    std::cout << "f1            " << report["f1"].get<double>() << '\n';
    for (std::size_t k : ks) {
        const std::string key = "pr@" + std::to_string(k);
        if (report.contains(key)) {
            std::cout << key << "          " << report[key].get<double>() << '\n';
        }
    }
    if (!report_path.empty()) {
        std::ofstream out(report_path, std::ios::trunc);
        out << report.dump(2) << '\n';
    }
    return 0;
}

int cmd_eval_felm(const std::string& input_path, bool paper_formula,
                  const std::string& report_path) {
    std::ifstream in(input_path);
    if (!in) throw FormatError("cannot open eval input: " + input_path);
    ConfusionCounts counts;
    std::string line;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        json j = json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.contains("labels") || !j.contains("predicted_false")) {
            throw FormatError("bad felm line in " + input_path);
        }
        const auto labels = j["labels"].get<std::vector<bool>>();
        const auto predicted_false = j["predicted_false"].get<std::vector<std::size_t>>();
        std::set<std::size_t> flagged(predicted_false.begin(), predicted_false.end());
        for (std::size_t i = 0; i < labels.size(); ++i) {
            const bool actual_true = labels[i];
            const bool predicted_true = !flagged.contains(i);
            if (actual_true && predicted_true) ++counts.tp;
            if (actual_true && !predicted_true) ++counts.fn;
            if (!actual_true && predicted_true) ++counts.fp;
            if (!actual_true && !predicted_true) ++counts.tn;
        }
    }
    bool degenerate = false;
    const double accuracy = balanced_accuracy(counts, paper_formula, &degenerate);
    const double f1 = felm_f1(counts);
    json report = {{"balanced_accuracy", accuracy},
                   {"f1", f1},
                   {"tp", counts.tp},
                   {"fp", counts.fp},
                   {"tn", counts.tn},
                   {"fn", counts.fn},
                   {"degenerate", degenerate}};
    std::cout << "balanced accuracy  " << accuracy << '\n';
    std::cout << "f1                 " << f1 << '\n';
    if (!report_path.empty()) {
        std::ofstream out(report_path, std::ios::trunc);
        out << report.dump(2) << '\n';
    }
    return 0;
}

int cmd_eval_mcq(const std::string& graph_path, const std::string& condition_name,
                 const GatewayOptions& gw_opts, const json& config,
                 const std::string& report_path) {
    const auto condition = mcq_condition_from_string(condition_name);
    if (!condition) throw ConfigError("unknown mcq condition: " + condition_name);
    const KnowledgeGraph graph = load_graph(graph_path);
    auto gateway = make_gateway(gw_opts, config);
    std::vector<std::string> passage_ids;
    for (const auto& [id, text] : graph.passages()) passage_ids.push_back(id);
    const McqProtocolReport report =
        mcq_protocol(graph, passage_ids, *gateway, *condition);
    json j = {{"condition", condition_name},
              {"items", report.items},
              {"correct", report.correct},
              {"non_letter", report.non_letter},
              {"dropped", report.dropped},
              {"accuracy", report.accuracy()}};
    std::cout << "mcq " << condition_name << ": accuracy " << report.accuracy() << " ("
              << report.correct << "/" << report.items << ")\n";
    if (!report_path.empty()) {
        std::ofstream out(report_path, std::ios::trunc);
        out << j.dump(2) << '\n';
    }
    return 0;
}

int cmd_eval_schema(const std::string& induced_csv, const std::string& truth_path,
                    const GatewayOptions& gw_opts, const json& config,
                    const std::string& report_path) {
    const std::vector<ConceptRecord> records = read_concept_csv(induced_csv);
    std::ifstream in(truth_path);
    if (!in) throw FormatError("cannot open truth file: " + truth_path);
    json truth = json::parse(in, nullptr, false);
    if (truth.is_discarded() || !truth.is_object()) {
        throw FormatError("truth file must map element -> [types]");
    }
    auto gateway = make_gateway(gw_opts, config);

    double bsr_sum = 0.0;
    std::size_t instances = 0;
    std::vector<std::string> truth_union;
    std::vector<std::string> induced_union;
    for (const ConceptRecord& record : records) {
        if (!truth.contains(record.element_text)) continue;
        const auto types = truth[record.element_text].get<std::vector<std::string>>();
        if (types.empty() || record.phrases.empty()) continue;
        bsr_sum += bs_recall(types, record.phrases, *gateway);
        ++instances;
        truth_union.insert(truth_union.end(), types.begin(), types.end());
        induced_union.insert(induced_union.end(), record.phrases.begin(),
                             record.phrases.end());
    }
    if (instances == 0) throw FormatError("no overlapping elements between CSV and truth");
    const double bsr = bsr_sum / static_cast<double>(instances);
    const double bsc = bs_coverage(truth_union, induced_union, *gateway);
    json report = {{"instances", instances}, {"bs_r", bsr}, {"bs_c", bsc}};
    std::cout << "bs-r  " << bsr << '\n' << "bs-c  " << bsc << '\n';
    if (!report_path.empty()) {
        std::ofstream out(report_path, std::ios::trunc);
        out << report.dump(2) << '\n';
    }
    return 0;
}

int cmd_stats(const std::string& graph_path) {
    const KnowledgeGraph graph = load_graph(graph_path);
    std::cout << format_stats(graph.stats());
    const CheckReport report = graph.check();
    std::cout << "graph check: " << (report.ok ? "ok" : "FAILED") << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"knowledge graph construction and graph-based retrieval"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    std::string config_path;
    GatewayOptions gw_opts;
    app.add_option("--config", config_path, "config file (JSON)");
    app.add_flag("--mock", gw_opts.mock, "use the deterministic mock gateway");
    app.add_option("--mock-rules", gw_opts.mock_rules, "mock rule table (JSON)");
    app.add_option("--mock-dim", gw_opts.mock_dim, "mock embedding dimension");
    app.add_option("--seed", gw_opts.seed, "rng seed");
    app.add_option("--gateway-url", gw_opts.url, "gateway base url override");

    // extract
    auto* extract = app.add_subcommand("extract", "corpus -> triple batches");
    std::string corpus_path;
    std::string out_dir;
    extract->add_option("--corpus", corpus_path, "JSON-lines corpus")->required();
    extract->add_option("--out", out_dir, "output run directory")->required();

    // build-graph
    auto* build = app.add_subcommand("build-graph", "triple batches -> graph file");
    std::string batches_dir;
    std::string graph_out;
    build->add_option("--batches", batches_dir, "triple batch directory")->required();
    build->add_option("--out", graph_out, "graph file")->required();

    // induce
    auto* induce = app.add_subcommand("induce", "schema induction over a graph");
    std::string graph_in;
    std::string induce_out;
    std::string csv_out;
    std::string checkpoint;
    induce->add_option("--graph", graph_in, "input graph file")->required();
    induce->add_option("--out", induce_out, "output graph file")->required();
    induce->add_option("--csv", csv_out, "concept CSV output");
    induce->add_option("--checkpoint", checkpoint, "resumable checkpoint file");

    // index
    auto* index = app.add_subcommand("index", "build vector indexes");
    std::string index_graph;
    std::string index_dir;
    std::string targets = "nodes,edges,passages";
    index->add_option("--graph", index_graph, "graph file")->required();
    index->add_option("--out-dir", index_dir, "index directory")->required();
    index->add_option("--targets", targets, "comma list: nodes,edges,passages");

    // retrieve
    auto* retrieve = app.add_subcommand("retrieve", "query the graph");
    std::string retrieve_graph;
    std::string retrieve_index_dir;
    std::string question;
    std::string questions_path;
    std::string results_out;
    RetrieveOptions ropts;
    retrieve->add_option("--graph", retrieve_graph, "graph file")->required();
    retrieve->add_option("--index-dir", retrieve_index_dir, "index directory")->required();
    retrieve->add_option("--method", ropts.method, "tog | ppr | large");
    retrieve->add_option("--question", question, "single question");
    retrieve->add_option("--questions", questions_path, "JSON-lines question file");
    retrieve->add_option("--out", results_out, "JSON-lines results file");
    retrieve->add_flag("--answer", ropts.generate_answer,
                       "generate an answer from retrieved passages");
    retrieve->add_flag("--hipporag1", ropts.hipporag1,
                       "NER-node personalization preset (ppr)");
    retrieve->add_option("--top-n", ropts.tog.top_n, "tog: paths kept per prune");
    retrieve->add_option("--d-max", ropts.tog.d_max, "tog: expansion rounds");
    retrieve->add_option("--initial-nodes", ropts.tog.initial_nodes, "tog: seed nodes");
    retrieve->add_option("--top-n-edges", ropts.ppr.top_n_edges, "ppr: edges filtered");
    retrieve->add_option("--weight-adjust", ropts.ppr.weight_adjust,
                         "ppr: passage similarity weight");
    retrieve->add_option("--damping", ropts.ppr.damping, "ppr: damping factor");
    retrieve->add_option("--top-k", ropts.ppr.top_k_passages, "ppr: passages returned");
    retrieve->add_option("--source-nodes", ropts.large.number_of_source_nodes,
                         "large: seed node budget");
    retrieve->add_option("--sampling-area", ropts.large.sampling_area,
                         "large: RWR node budget");
    retrieve->add_option("--restart-prob", ropts.large.restart_probability,
                         "large: RWR restart probability");
    retrieve->add_option("--top-n-passages", ropts.large.top_n_passages,
                         "large: passages returned");

    // eval
    auto* eval = app.add_subcommand("eval", "metric suites");
    std::string suite;
    std::string eval_input;
    std::string eval_graph;
    std::string condition = "none";
    std::string truth_path;
    std::string report_path;
    bool paper_formula = false;
    std::vector<std::size_t> ks{2, 5};
    eval->add_option("--suite", suite, "qa | felm | mcq | schema")->required();
    eval->add_option("--input", eval_input, "JSON-lines input (qa, felm)");
    eval->add_option("--graph", eval_graph, "graph file (mcq)");
    eval->add_option("--condition", condition, "mcq context condition");
    eval->add_option("--induced", eval_input, "induced concept CSV (schema)");
    eval->add_option("--truth", truth_path, "ground-truth types JSON (schema)");
    eval->add_option("--report", report_path, "JSON report output");
    eval->add_option("--k", ks, "PR@k cutoffs (qa)");
    eval->add_flag("--paper-formula", paper_formula,
                   "balanced accuracy as the plain sum of recalls");

    // stats
    auto* stats = app.add_subcommand("stats", "graph statistics report");
    std::string stats_graph;
    stats->add_option("--graph", stats_graph, "graph file")->required();

    // Global options (--mock, --seed, ...) may follow the subcommand name.
    for (CLI::App* sub : app.get_subcommands(nullptr)) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        // Uniform contract: usage problems exit 1; --help/--version exit 0.
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        const json config = load_config(config_path);
        if (extract->parsed()) return cmd_extract(corpus_path, out_dir, gw_opts, config);
        if (build->parsed()) return cmd_build_graph(batches_dir, graph_out);
        if (induce->parsed()) {
            return cmd_induce(graph_in, induce_out, csv_out, checkpoint, gw_opts, config);
        }
        if (index->parsed()) {
            return cmd_index(index_graph, index_dir, targets, gw_opts, config);
        }
        if (retrieve->parsed()) {
            apply_retrieve_config(config, *retrieve, ropts.tog, ropts.ppr, ropts.large);
            if (gw_opts.seed != 0 && ropts.large.rng_seed == 0) {
                ropts.large.rng_seed = gw_opts.seed;
            }
            return cmd_retrieve(retrieve_graph, retrieve_index_dir, question,
                                questions_path, results_out, ropts, gw_opts, config);
        }
        if (eval->parsed()) {
            if (suite == "qa") return cmd_eval_qa(eval_input, ks, report_path);
            if (suite == "felm") return cmd_eval_felm(eval_input, paper_formula, report_path);
            if (suite == "mcq") {
                return cmd_eval_mcq(eval_graph, condition, gw_opts, config, report_path);
            }
            if (suite == "schema") {
                return cmd_eval_schema(eval_input, truth_path, gw_opts, config,
                                       report_path);
            }
            throw ConfigError("unknown eval suite: " + suite);
        }
        if (stats->parsed()) return cmd_stats(stats_graph);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 1;
    } catch (const InvalidArgument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const TransportError& e) {
        std::cerr << "gateway error: " << e.what() << '\n';
        return 2;
    } catch (const FormatError& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return 3;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 1;
}
