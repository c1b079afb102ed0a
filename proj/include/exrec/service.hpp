#pragma once

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <ostream>
#include <shared_mutex>
#include <string>

#include "httplib.h"
#include "json.hpp"

#include "exrec/engine.hpp"

namespace exrec {

/// Committed user models, one JSON file per user under `dir`. Writes go
/// through a temporary file and rename. Each user has its own lock; readers
/// get an immutable snapshot.
class UserRepository {
 public:
  explicit UserRepository(std::filesystem::path dir) : dir_(std::move(dir)) {
    std::filesystem::create_directories(dir_);
    for (const auto& entry : std::filesystem::directory_iterator(dir_)) {
      if (entry.path().extension() != ".json") continue;
      std::ifstream in(entry.path());
      try {
        auto model = nlohmann::json::parse(in).get<InterestModel>();
        auto slot = std::make_shared<Slot>();
        slot->model = std::make_shared<const InterestModel>(std::move(model));
        slots_.emplace(slot->model->user_id(), std::move(slot));
      } catch (const std::exception& e) {
        throw Error(Errc::ParseError, entry.path().string() + ": " + e.what());
      }
    }
  }

  std::shared_ptr<const InterestModel> get(const std::string& user_id) const {
    const auto slot = find(user_id);
    if (!slot) return nullptr;
    std::shared_lock lock(slot->mutex);
    return slot->model;
  }

  /// Inserts a new user; false when the id is taken.
  bool create(InterestModel model) {
    std::shared_ptr<Slot> slot;
    {
      std::unique_lock lock(map_mutex_);
      if (slots_.contains(model.user_id())) return false;
      slot = std::make_shared<Slot>();
      slots_.emplace(model.user_id(), slot);
    }
    std::unique_lock lock(slot->mutex);
    persist(model);
    slot->model = std::make_shared<const InterestModel>(std::move(model));
    return true;
  }

  /// Applies `update` to the committed model under the user's lock and
  /// commits the result.
  template <typename Fn>
  std::shared_ptr<const InterestModel> update(const std::string& user_id, Fn&& update) {
    const auto slot = find(user_id);
    if (!slot) return nullptr;
    std::unique_lock lock(slot->mutex);
    InterestModel next = update(*slot->model);
    persist(next);
    slot->model = std::make_shared<const InterestModel>(std::move(next));
    return slot->model;
  }

  std::size_t size() const {
    std::shared_lock lock(map_mutex_);
    return slots_.size();
  }

  std::filesystem::path path_for(const std::string& user_id) const { return dir_ / (user_id + ".json"); }

 private:
  struct Slot {
    mutable std::shared_mutex mutex;
    std::shared_ptr<const InterestModel> model;
  };

  std::shared_ptr<Slot> find(const std::string& user_id) const {
    std::shared_lock lock(map_mutex_);
    const auto it = slots_.find(user_id);
    return it == slots_.end() ? nullptr : it->second;
  }

  void persist(const InterestModel& model) const {
    const auto target = path_for(model.user_id());
    auto tmp = target;
    tmp += ".tmp";
    {
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      out << nlohmann::json(model).dump(2) << '\n';
      if (!out) throw Error(Errc::Io, "cannot write " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, target, ec);
    if (ec) throw Error(Errc::Io, "cannot rename " + tmp.string() + ": " + ec.message());
  }

  std::filesystem::path dir_;
  mutable std::shared_mutex map_mutex_;
  std::map<std::string, std::shared_ptr<Slot>> slots_;
};

inline int http_status_for(Errc code) {
  switch (code) {
    case Errc::NotFound: return 404;
    case Errc::RemoteUnavailable:
    case Errc::RateLimited: return 503;
    case Errc::Io: return 500;
    default: return 400;
  }
}

/// HTTP/JSON facade over an Engine and a UserRepository.
class HttpService {
 public:
  HttpService(std::shared_ptr<const Engine> engine, std::shared_ptr<UserRepository> users,
              std::ostream* request_log = &std::cerr)
      : engine_(std::move(engine)), users_(std::move(users)), log_(request_log) {
    routes();
  }

  httplib::Server& server() noexcept { return server_; }

  bool listen(const std::string& host, int port) { return server_.listen(host, port); }
  int bind_to_any_port(const std::string& host) { return server_.bind_to_any_port(host); }
  bool listen_after_bind() { return server_.listen_after_bind(); }
  void stop() { server_.stop(); }
  void wait_until_ready() { server_.wait_until_ready(); }

 private:
  using Request = httplib::Request;
  using Response = httplib::Response;

  static void send_json(Response& res, int status, const nlohmann::json& body) {
    res.status = status;
    res.set_content(body.dump(2), "application/json");
  }

  static void send_error(Response& res, int status, std::string_view code, const std::string& message) {
    send_json(res, status, {{"error", code}, {"message", message}});
  }

  static nlohmann::json parse_body(const Request& req) {
    try {
      return nlohmann::json::parse(req.body);
    } catch (const nlohmann::json::parse_error& e) {
      throw Error(Errc::InvalidArgument, std::string("request body is not JSON: ") + e.what());
    }
  }

  std::shared_ptr<const InterestModel> user_or_throw(const std::string& id) const {
    auto model = users_->get(id);
    if (!model) throw Error(Errc::NotFound, "unknown user '" + id + "'");
    return model;
  }

  static bool flag(const Request& req, const char* name) {
    if (!req.has_param(name)) return false;
    const auto v = req.get_param_value(name);
    return v == "1" || v == "true" || v == "yes";
  }

  static ExplanationLevel requested_level(const Request& req) {
    const bool has_c = req.has_param("completeness");
    const bool has_s = req.has_param("soundness");
    if (has_c || has_s) {
      if (!(has_c && has_s)) {
        throw Error(Errc::InvalidArgument, "completeness and soundness must be given together");
      }
      const auto c = parse_grade<Completeness>(req.get_param_value("completeness"));
      const auto s = parse_grade<Soundness>(req.get_param_value("soundness"));
      if (!c || !s) throw Error(Errc::InvalidArgument, "completeness/soundness must be low, medium or high");
      const auto level = level_for(*c, *s);
      if (req.has_param("level") && parse_level(req.get_param_value("level")) != level) {
        throw Error(Errc::InvalidArgument, "level contradicts completeness/soundness");
      }
      return level;
    }
    if (!req.has_param("level")) return ExplanationLevel::Basic;
    const auto level = parse_level(req.get_param_value("level"));
    if (!level) throw Error(Errc::InvalidArgument, "level must be basic, intermediate or advanced");
    return *level;
  }

  template <typename Fn>
  httplib::Server::Handler guarded(Fn fn) {
    return [fn = std::move(fn)](const Request& req, Response& res) {
      try {
        fn(req, res);
      } catch (const Error& e) {
        send_error(res, http_status_for(e.code()), errc_name(e.code()), e.what());
      } catch (const std::exception& e) {
        send_error(res, 500, "Internal", e.what());
      }
    };
  }

  void routes() {
    server_.set_logger([this](const Request& req, const Response& res) {
      if (!log_) return;
      const auto now = std::chrono::duration_cast<std::chrono::milliseconds>(
                           std::chrono::system_clock::now().time_since_epoch())
                           .count();
      const nlohmann::json line = {{"ts_ms", now}, {"method", req.method}, {"path", req.path},
                                   {"status", res.status}, {"bytes", res.body.size()}};
      std::lock_guard lock(log_mutex_);
      *log_ << line.dump() << '\n';
    });

    server_.Get("/health", guarded([](const Request&, Response& res) { send_json(res, 200, {{"status", "ok"}}); }));

    server_.Get("/meta/levels", guarded([](const Request&, Response& res) { send_json(res, 200, levels_table()); }));

    server_.Post("/users", guarded([this](const Request& req, Response& res) {
      auto model = engine_->model_from_profile(parse_body(req));
      const nlohmann::json body = {{"user_id", model.user_id()}, {"interests", model.interests()}};
      if (!users_->create(std::move(model))) {
        send_error(res, 409, "Conflict", "user already exists; edit interests with PATCH");
        return;
      }
      send_json(res, 201, body);
    }));

    server_.Get(R"(/users/([^/]+)/interests)", guarded([this](const Request& req, Response& res) {
      send_json(res, 200, build_what(*user_or_throw(req.matches[1])));
    }));

    server_.Patch(R"(/users/([^/]+)/interests)", guarded([this](const Request& req, Response& res) {
      const auto edits = parse_edits(parse_body(req));
      const std::string id = req.matches[1];
      auto committed = users_->update(id, [&](const InterestModel& current) {
        return edit_interests(current, edits, engine_->store());
      });
      if (!committed) throw Error(Errc::NotFound, "unknown user '" + id + "'");
      send_json(res, 200, *committed);
    }));

    server_.Get(R"(/users/([^/]+)/recommendations)", guarded([this](const Request& req, Response& res) {
      const auto model = user_or_throw(req.matches[1]);
      ResponseOptions opts{requested_level(req), flag(req, "full_vectors")};
      send_json(res, 200, engine_->recommendations_response(*model, opts));
    }));

    server_.Get(R"(/users/([^/]+)/recommendations/([^/]+)/why)", guarded([this](const Request& req, Response& res) {
      const auto model = user_or_throw(req.matches[1]);
      const auto rec = engine_->score_candidate(*model, req.matches[2]);
      send_json(res, 200, build_why_detailed(rec, *model));
    }));

    server_.Get(R"(/users/([^/]+)/recommendations/([^/]+)/how)", guarded([this](const Request& req, Response& res) {
      const auto model = user_or_throw(req.matches[1]);
      const auto rec = engine_->score_candidate(*model, req.matches[2]);
      send_json(res, 200, build_how_trace(*model, rec, engine_->store(), flag(req, "full_vectors")));
    }));

    server_.Post(R"(/users/([^/]+)/whatif)", guarded([this](const Request& req, Response& res) {
      const auto model = user_or_throw(req.matches[1]);
      send_json(res, 200, engine_->whatif(*model, parse_edits(parse_body(req))));
    }));

    server_.Get(R"(/debug/users/([^/]+)/scores)", guarded([this](const Request& req, Response& res) {
      send_json(res, 200, engine_->all_scores(*user_or_throw(req.matches[1])));
    }));
  }

  std::shared_ptr<const Engine> engine_;
  std::shared_ptr<UserRepository> users_;
  std::ostream* log_;
  std::mutex log_mutex_;
  httplib::Server server_;
};

}  // namespace exrec
