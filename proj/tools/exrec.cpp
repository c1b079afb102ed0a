// exrec: batch recommendations, the HTTP service, and the level table.
//
// Exit codes: 0 success, 1 unexpected failure, 2 invalid arguments or
// input values, 3 I/O and load failures.

#include <csignal>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "exrec/engine.hpp"
#include "exrec/service.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitIo = 3;

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw exrec::Error(exrec::Errc::Io, "cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw exrec::Error(exrec::Errc::ParseError, path + ": " + e.what());
  }
}

void write_json(const fs::path& path, const json& j) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << j.dump(2) << '\n';
  if (!out) throw exrec::Error(exrec::Errc::Io, "cannot write '" + path.string() + "'");
}

// File names must survive arbitrary publication ids.
std::string safe_name(const std::string& id) {
  std::string out;
  for (unsigned char c : id) out += (std::isalnum(c) || c == '-' || c == '_') ? static_cast<char>(c) : '_';
  return out;
}

struct BatchArgs {
  std::string embeddings, corpus, profile, stopwords, scenario, out_dir = "out", level = "basic";
  double threshold = exrec::kDefaultThreshold;
  double highlight_threshold = exrec::kDefaultHighlightThreshold;
  std::size_t top_k = exrec::kDefaultTopK;
  std::size_t top_interests = exrec::kDefaultActiveInterests;
  bool full_vectors = false;
};

int run_batch(const BatchArgs& a) {
  const auto level = exrec::parse_level(a.level);
  if (!level) throw exrec::Error(exrec::Errc::InvalidArgument, "level must be basic, intermediate or advanced");

  exrec::ServiceConfig cfg;
  cfg.embedding_path = a.embeddings;
  cfg.corpus_path = a.corpus;
  cfg.stopword_path = a.stopwords;
  cfg.threshold = a.threshold;
  cfg.top_k = a.top_k;
  cfg.top_interests = a.top_interests;
  cfg.highlight_threshold = a.highlight_threshold;
  cfg.validate();

  // Read every input before writing anything.
  const auto profile = read_json(a.profile);
  std::optional<std::vector<exrec::InterestEdit>> edits;
  if (!a.scenario.empty()) edits = exrec::parse_edits(read_json(a.scenario));

  const exrec::Engine engine(cfg);
  const auto model = engine.model_from_profile(profile);
  const auto response = engine.recommendations_response(model, {*level, a.full_vectors});

  fs::create_directories(fs::path(a.out_dir) / "explanations");
  write_json(fs::path(a.out_dir) / "recommendations.json", response);
  for (const auto& item : response.at("items")) {
    const auto name = std::to_string(item.at("rank").get<int>()) + "_" +
                      safe_name(item.at("publication").at("id").get<std::string>()) + ".json";
    write_json(fs::path(a.out_dir) / "explanations" / name, item.at("explanation"));
  }
  if (edits) write_json(fs::path(a.out_dir) / "whatif_diff.json", engine.whatif(model, *edits));

  std::cerr << "exrec: " << response.at("items").size() << " recommendation(s) for " << model.user_id() << " -> "
            << a.out_dir << '\n';
  return 0;
}

exrec::HttpService* g_service = nullptr;

struct ServeArgs {
  std::string config, embeddings, corpus, data_dir;
  std::optional<int> port;
};

// Precedence: flags, then EXREC_* variables, then the config file.
int run_serve(const ServeArgs& a) {
  exrec::ServiceConfig cfg = a.config.empty() ? exrec::ServiceConfig{} : exrec::load_config_file(a.config);
  exrec::apply_env_overrides(cfg);
  if (!a.embeddings.empty()) cfg.embedding_path = a.embeddings;
  if (!a.corpus.empty()) cfg.corpus_path = a.corpus;
  if (!a.data_dir.empty()) cfg.data_dir = a.data_dir;
  if (a.port) cfg.port = *a.port;
  cfg.validate();

  auto engine = std::make_shared<const exrec::Engine>(cfg);
  auto users = std::make_shared<exrec::UserRepository>(fs::path(cfg.data_dir) / "users");
  exrec::HttpService service(engine, users);
  g_service = &service;
  std::signal(SIGINT, [](int) { if (g_service) g_service->stop(); });
  std::signal(SIGTERM, [](int) { if (g_service) g_service->stop(); });

  std::cerr << json{{"event", "listening"},
                    {"host", cfg.host},
                    {"port", cfg.port},
                    {"corpus", engine->corpus().size()},
                    {"rejected_records", engine->rejected_records()},
                    {"users", users->size()}}
                   .dump()
            << '\n';
  if (!service.listen(cfg.host, cfg.port)) {
    throw exrec::Error(exrec::Errc::Io, "cannot listen on " + cfg.host + ":" + std::to_string(cfg.port));
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Explainable content-based publication recommender"};
  app.require_subcommand(1);

  BatchArgs batch;
  auto* batch_cmd = app.add_subcommand("batch", "Recommend for one profile and write explanation bundles");
  batch_cmd->add_option("--embeddings", batch.embeddings, "word2vec text embedding file")->required();
  batch_cmd->add_option("--corpus", batch.corpus, "candidate corpus JSON")->required();
  batch_cmd->add_option("--profile", batch.profile, "user profile JSON")->required();
  batch_cmd->add_option("--level", batch.level, "basic | intermediate | advanced")->capture_default_str();
  batch_cmd->add_option("--out-dir", batch.out_dir, "output directory")->capture_default_str();
  batch_cmd->add_option("--threshold", batch.threshold, "recommendation threshold")->capture_default_str();
  batch_cmd->add_option("--top-k", batch.top_k, "maximum recommendations")->capture_default_str();
  batch_cmd->add_option("--top-interests", batch.top_interests, "active interests")->capture_default_str();
  batch_cmd->add_option("--highlight-threshold", batch.highlight_threshold, "keyword highlight threshold")
      ->capture_default_str();
  batch_cmd->add_option("--stopwords", batch.stopwords, "stopword list (one word per line)");
  batch_cmd->add_option("--scenario", batch.scenario, "what-if edits JSON {\"edits\": [...]}");
  batch_cmd->add_flag("--full-vectors", batch.full_vectors, "include full vectors in how traces");

  ServeArgs serve;
  auto* serve_cmd = app.add_subcommand("serve", "Run the HTTP service");
  serve_cmd->add_option("--config", serve.config, "service config JSON");
  serve_cmd->add_option("--embeddings", serve.embeddings, "word2vec text embedding file");
  serve_cmd->add_option("--corpus", serve.corpus, "candidate corpus JSON");
  serve_cmd->add_option("--data-dir", serve.data_dir, "user model directory");
  serve_cmd->add_option("--port", serve.port, "listen port");

  auto* levels_cmd = app.add_subcommand("levels", "Print explanation levels and combination verdicts");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitValidation;
  }

  try {
    if (*batch_cmd) return run_batch(batch);
    if (*serve_cmd) return run_serve(serve);
    if (*levels_cmd) {
      std::cout << exrec::levels_table().dump(2) << '\n';
      return 0;
    }
  } catch (const exrec::Error& e) {
    std::cerr << "exrec: " << e.what() << '\n';
    return exrec::is_validation_error(e.code()) ? kExitValidation : kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "exrec: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
