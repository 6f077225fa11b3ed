// Copyright 2026 The eyesam Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "eyesam/annotate.hpp"

#include <opencv2/imgcodecs.hpp>

#include "httplib.h"

#include "eyesam/image_io.hpp"
#include "eyesam/rle.hpp"

namespace eyesam {

struct AnnotationService::Session {
  std::string id;
  std::string image_ref;
  std::string digest;
  cv::Mat image;
  EmbeddingHandle handle;
  bool cached = false;
  std::vector<CommitEntry> history;
  mutable std::mutex mutex;
};

nlohmann::json prompts_to_json(const PromptSet& prompts) {
  nlohmann::json points = nlohmann::json::array();
  for (const auto& p : prompts.points) {
    points.push_back({{"x", p.x}, {"y", p.y}, {"label", p.foreground() ? 1 : 0}});
  }
  nlohmann::json j{{"points", points}};
  if (prompts.box) {
    const Box& b = *prompts.box;
    j["box"] = {b.x_min, b.y_min, b.x_max, b.y_max};
  }
  return j;
}

PromptSet prompts_from_json(const nlohmann::json& j) {
  PromptSet out;
  try {
    if (j.contains("points") && !j.at("points").is_null()) {
      for (const auto& p : j.at("points")) {
        Point pt{p.at("x").get<int>(), p.at("y").get<int>(), PointLabel::kForeground};
        if (p.contains("label")) {
          const auto& l = p.at("label");
          const bool fg = l.is_string() ? l.get<std::string>() == "foreground"
                                        : l.get<int>() == 1;
          if (!fg && !(l.is_string() ? l.get<std::string>() == "background"
                                     : l.get<int>() == 0)) {
            throw Error(ErrorCode::kInvalidArgument, "point label must be 0 or 1");
          }
          pt.label = fg ? PointLabel::kForeground : PointLabel::kBackground;
        }
        out.points.push_back(pt);
      }
    }
    if (j.contains("box") && !j.at("box").is_null()) {
      const auto v = j.at("box").get<std::vector<int>>();
      if (v.size() != 4) throw Error(ErrorCode::kInvalidArgument, "box needs 4 numbers");
      if (v[0] > v[2] || v[1] > v[3]) {
        throw Error(ErrorCode::kInvalidArgument, "box corners out of order");
      }
      out.box = Box{v[0], v[1], v[2], v[3]};
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kInvalidArgument, std::string("bad prompts: ") + e.what());
  }
  return out;
}

LabelMap replay_history(ImageSize size, const std::vector<CommitEntry>& history) {
  LabelMap out(size.width, size.height);
  for (Feature f : {Feature::kSclera, Feature::kIris, Feature::kPupil}) {
    for (const auto& c : history) {
      if (c.feature != f) continue;
      for (const auto& [x, y] : c.mask.foreground()) out.set(x, y, feature_class(f));
    }
  }
  return out;
}

AnnotationService::AnnotationService(std::unique_ptr<SegmenterBackend> backend,
                                     std::optional<DatasetManifest> dataset)
    : backend_(std::move(backend)), dataset_(std::move(dataset)) {
  if (!backend_) throw Error(ErrorCode::kInvalidArgument, "backend is required");
}

AnnotationService::~AnnotationService() {
  for (const auto& [_, h] : cache_) {
    try {
      backend_->release(h);
    } catch (...) {
    }
  }
}

SessionInfo AnnotationService::open(cv::Mat image, std::string image_ref,
                                    const std::optional<LabelMap>& labels) {
  const std::string digest = image_digest(image);
  std::optional<EmbeddingHandle> handle;
  bool cached = false;
  {
    std::shared_lock lock(cache_mutex_);
    if (auto it = cache_.find(digest); it != cache_.end()) {
      handle = it->second;
      cached = true;
    }
  }
  if (!handle) {
    std::unique_lock lock(cache_mutex_);
    if (auto it = cache_.find(digest); it != cache_.end()) {
      handle = it->second;
      cached = true;
    } else {
      handle = backend_->embed(image);
      ++embeds_;
      cache_.emplace(digest, *handle);
    }
  }
  if (labels) backend_->attach_ground_truth(*handle, *labels, std::nullopt);

  auto s = std::make_shared<Session>();
  s->image_ref = std::move(image_ref);
  s->digest = digest;
  s->image = std::move(image);
  s->handle = *handle;
  s->cached = cached;
  {
    std::unique_lock lock(sessions_mutex_);
    s->id = "s" + std::to_string(next_id_++);
    sessions_.emplace(s->id, s);
  }
  return {s->id, s->image_ref, s->digest, s->handle.image_size, s->cached};
}

SessionInfo AnnotationService::create_session(std::span<const std::uint8_t> image_bytes) {
  cv::Mat image = decode_image(image_bytes);
  return open(std::move(image), "upload:" + sha256_hex(image_bytes), std::nullopt);
}

SessionInfo AnnotationService::create_session_from_item(const std::string& item_id) {
  if (!dataset_) throw Error(ErrorCode::kNoData, "no dataset is attached to this service");
  const auto& items = dataset_->items;
  const auto it = std::find_if(items.begin(), items.end(),
                               [&](const ManifestEntry& e) { return e.id == item_id; });
  if (it == items.end()) throw Error(ErrorCode::kInvalidHandle, "unknown item '" + item_id + "'");
  DatasetItem item = load_item(*dataset_, static_cast<std::size_t>(it - items.begin()));
  return open(std::move(item.image), "item:" + item_id, item.labels);
}

std::shared_ptr<AnnotationService::Session> AnnotationService::find(const std::string& id) const {
  std::shared_lock lock(sessions_mutex_);
  const auto it = sessions_.find(id);
  if (it == sessions_.end()) throw Error(ErrorCode::kInvalidHandle, "unknown session '" + id + "'");
  return it->second;
}

SessionInfo AnnotationService::info(const std::string& id) const {
  const auto s = find(id);
  return {s->id, s->image_ref, s->digest, s->handle.image_size, s->cached};
}

cv::Mat AnnotationService::image(const std::string& id) const { return find(id)->image; }

Prediction AnnotationService::predict(const std::string& id, Feature, const PromptSet& prompts) {
  const auto s = find(id);
  std::lock_guard lock(s->mutex);
  const PredictionSet preds = backend_->predict(s->handle, prompts);
  std::size_t best = 0;
  for (std::size_t i = 1; i < preds.scores.size(); ++i) {
    if (preds.scores[i] > preds.scores[best]) best = i;
  }
  return {preds.masks[best], preds.scores[best]};
}

std::size_t AnnotationService::commit(const std::string& id, Feature feature, BinaryMask mask,
                                      PromptSet prompts) {
  const auto s = find(id);
  std::lock_guard lock(s->mutex);
  if (mask.width() != s->handle.image_size.width ||
      mask.height() != s->handle.image_size.height) {
    throw Error(ErrorCode::kShapeMismatch, "mask does not match the session image");
  }
  s->history.push_back({feature, std::move(mask), std::move(prompts)});
  return s->history.size();
}

std::size_t AnnotationService::undo(const std::string& id) {
  const auto s = find(id);
  std::lock_guard lock(s->mutex);
  if (s->history.empty()) throw Error(ErrorCode::kNoData, "nothing to undo");
  s->history.pop_back();
  return s->history.size();
}

std::vector<CommitEntry> AnnotationService::history(const std::string& id) const {
  const auto s = find(id);
  std::lock_guard lock(s->mutex);
  return s->history;
}

LabelMap AnnotationService::export_labels(const std::string& id) const {
  const auto s = find(id);
  std::lock_guard lock(s->mutex);
  if (s->history.empty()) throw Error(ErrorCode::kNoData, "session has no committed masks");
  return replay_history(s->handle.image_size, s->history);
}

nlohmann::json AnnotationService::export_provenance(const std::string& id) const {
  const auto s = find(id);
  std::lock_guard lock(s->mutex);
  if (s->history.empty()) throw Error(ErrorCode::kNoData, "session has no committed masks");
  nlohmann::json commits = nlohmann::json::array();
  for (const auto& c : s->history) {
    nlohmann::json e = prompts_to_json(c.prompts);
    e["class"] = feature_name(c.feature);
    e["pixels"] = c.mask.count();
    commits.push_back(e);
  }
  return {{"session", s->id},
          {"image_ref", s->image_ref},
          {"image_digest", s->digest},
          {"width", s->handle.image_size.width},
          {"height", s->handle.image_size.height},
          {"backend", backend_->identity()},
          {"class_priority", {"pupil", "iris", "sclera"}},
          {"commits", commits}};
}

std::size_t AnnotationService::session_count() const {
  std::shared_lock lock(sessions_mutex_);
  return sessions_.size();
}

std::size_t AnnotationService::embed_count() const { return embeds_; }

int http_status_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidHandle: return 404;
    case ErrorCode::kEmptyPrompt: return 422;
    case ErrorCode::kNoData: return 409;
    case ErrorCode::kBackendUnavailable:
    case ErrorCode::kBackendError: return 503;
    case ErrorCode::kIoError: return 500;
    default: return 400;
  }
}

struct AnnotationServer::Impl {
  explicit Impl(AnnotationService& s) : service(s) {}
  AnnotationService& service;
  httplib::Server server;
  std::atomic<bool> bound{false};
};

namespace {

void send_json(httplib::Response& res, int status, const nlohmann::json& j) {
  res.status = status;
  res.set_content(j.dump(), "application/json");
}

void send_error(httplib::Response& res, int status, const std::string& code,
                const std::string& message) {
  send_json(res, status, {{"error", code}, {"message", message}});
}

template <typename F>
httplib::Server::Handler guarded(F f) {
  return [f](const httplib::Request& req, httplib::Response& res) {
    try {
      f(req, res);
    } catch (const Error& e) {
      send_error(res, http_status_for(e.code()), std::string(error_code_name(e.code())),
                 e.what());
    } catch (const nlohmann::json::exception& e) {
      send_error(res, 400, "InvalidArgument", e.what());
    } catch (const std::exception& e) {
      send_error(res, 500, "Internal", e.what());
    }
  };
}

nlohmann::json parse_body(const httplib::Request& req) {
  const auto j = nlohmann::json::parse(req.body, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    throw Error(ErrorCode::kInvalidArgument, "request body must be a JSON object");
  }
  return j;
}

Feature parse_class(const nlohmann::json& j) {
  if (!j.contains("class")) throw Error(ErrorCode::kInvalidArgument, "missing \"class\"");
  const auto f = parse_feature(j.at("class").get<std::string>());
  if (!f) throw Error(ErrorCode::kInvalidArgument, "unknown class");
  return *f;
}

nlohmann::json info_json(const SessionInfo& s) {
  return {{"session_id", s.id}, {"image_ref", s.image_ref}, {"image_digest", s.digest},
          {"width", s.size.width}, {"height", s.size.height},
          {"cached_embedding", s.cached_embedding}};
}

std::string png_bytes(const cv::Mat& m) {
  std::vector<std::uint8_t> buf;
  if (!cv::imencode(".png", m, buf)) throw Error(ErrorCode::kIoError, "PNG encoding failed");
  return std::string(buf.begin(), buf.end());
}

}  // namespace

AnnotationServer::AnnotationServer(AnnotationService& service,
                                   std::optional<std::filesystem::path> static_dir)
    : impl_(std::make_unique<Impl>(service)) {
  auto& svc = impl_->service;
  auto& srv = impl_->server;
  srv.set_payload_max_length(64u << 20);
  srv.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                           {"Access-Control-Allow-Headers", "Content-Type"},
                           {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"}});
  srv.Options(R"(.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });

  srv.Get("/health", guarded([&svc](const httplib::Request&, httplib::Response& res) {
    send_json(res, 200, {{"status", "ok"}, {"backend", svc.backend().identity()}});
  }));
  srv.Get("/items", guarded([&svc](const httplib::Request&, httplib::Response& res) {
    nlohmann::json items = nlohmann::json::array();
    if (svc.dataset()) {
      for (const auto& e : svc.dataset()->items) {
        items.push_back({{"id", e.id}, {"labeled", e.label_path.has_value()}});
      }
    }
    send_json(res, 200, {{"items", items}});
  }));
  srv.Post("/sessions", guarded([&svc](const httplib::Request& req, httplib::Response& res) {
    SessionInfo info;
    if (req.get_header_value("Content-Type").find("application/json") != std::string::npos) {
      const auto j = parse_body(req);
      if (!j.contains("item_id")) throw Error(ErrorCode::kInvalidArgument, "missing item_id");
      info = svc.create_session_from_item(j.at("item_id").get<std::string>());
    } else {
      const auto* p = reinterpret_cast<const std::uint8_t*>(req.body.data());
      info = svc.create_session({p, req.body.size()});
    }
    send_json(res, 201, info_json(info));
  }));
  srv.Get(R"(/sessions/([^/]+))",
          guarded([&svc](const httplib::Request& req, httplib::Response& res) {
            const std::string id = req.matches[1];
            auto j = info_json(svc.info(id));
            j["history"] = svc.history(id).size();
            send_json(res, 200, j);
          }));
  srv.Get(R"(/sessions/([^/]+)/image)",
          guarded([&svc](const httplib::Request& req, httplib::Response& res) {
            res.set_content(png_bytes(svc.image(req.matches[1])), "image/png");
          }));
  srv.Post(R"(/sessions/([^/]+)/predict)",
           guarded([&svc](const httplib::Request& req, httplib::Response& res) {
             const std::string id = req.matches[1];
             svc.info(id);
             const auto j = parse_body(req);
             const Feature f = parse_class(j);
             const Prediction p = svc.predict(id, f, prompts_from_json(j));
             send_json(res, 200, {{"class", feature_name(f)},
                                  {"mask", rle_to_json(rle_encode(p.mask))},
                                  {"score", p.score}});
           }));
  srv.Post(R"(/sessions/([^/]+)/commit)",
           guarded([&svc](const httplib::Request& req, httplib::Response& res) {
             const std::string id = req.matches[1];
             svc.info(id);
             const auto j = parse_body(req);
             const Feature f = parse_class(j);
             if (!j.contains("mask")) throw Error(ErrorCode::kInvalidArgument, "missing mask");
             BinaryMask mask = rle_decode(rle_from_json(j.at("mask")));
             const std::size_t depth = svc.commit(id, f, std::move(mask), prompts_from_json(j));
             send_json(res, 200, {{"history", depth}});
           }));
  srv.Post(R"(/sessions/([^/]+)/undo)",
           guarded([&svc](const httplib::Request& req, httplib::Response& res) {
             send_json(res, 200, {{"history", svc.undo(req.matches[1])}});
           }));
  srv.Get(R"(/sessions/([^/]+)/export)",
          guarded([&svc](const httplib::Request& req, httplib::Response& res) {
            const auto bytes = encode_label_png(svc.export_labels(req.matches[1]));
            res.set_content(std::string(bytes.begin(), bytes.end()), "image/png");
          }));
  srv.Get(R"(/sessions/([^/]+)/export/provenance)",
          guarded([&svc](const httplib::Request& req, httplib::Response& res) {
            send_json(res, 200, svc.export_provenance(req.matches[1]));
          }));
  if (static_dir) {
    if (!srv.set_mount_point("/", static_dir->string())) {
      throw Error(ErrorCode::kIoError, "cannot serve static files from " + static_dir->string());
    }
  }
}

AnnotationServer::~AnnotationServer() { stop(); }

int AnnotationServer::bind(const std::string& host, int port) {
  int bound = port;
  if (port == 0) {
    bound = impl_->server.bind_to_any_port(host);
  } else if (!impl_->server.bind_to_port(host, port)) {
    bound = -1;
  }
  if (bound < 0) {
    throw Error(ErrorCode::kIoError, "cannot bind " + host + ":" + std::to_string(port));
  }
  impl_->bound = true;
  return bound;
}

void AnnotationServer::listen() {
  if (!impl_->bound) throw Error(ErrorCode::kInvalidArgument, "bind before listen");
  impl_->server.listen_after_bind();
}

void AnnotationServer::stop() {
  if (impl_ && impl_->server.is_running()) impl_->server.stop();
}

bool AnnotationServer::running() const { return impl_->server.is_running(); }

}  // namespace eyesam
