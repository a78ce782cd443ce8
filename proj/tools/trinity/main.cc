/* Copyright 2026 The Trinity-Lite Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

// trinity: command-line front door to the platform. Remote commands talk to a
// running `trinity serve`; `profile ingest` and `inspect` work on local files.

#include <algorithm>
#include <csignal>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <pthread.h>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "client.hpp"
#include "trinity/error.hpp"
#include "trinity/inference/heatmap.hpp"
#include "trinity/kernel/checkpoint.hpp"
#include "trinity/service/http_api.hpp"
#include "trinity/service/platform.hpp"
#include "trinity/store/channel_store.hpp"
#include "trinity/util/fs.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using trinity::cli::ApiClient;
using trinity::cli::CliConfig;
using trinity::cli::CliError;

namespace {

struct Globals {
  std::string config_path;
  std::string server;
  std::string token;
  bool json = false;
  int poll_ms = 500;
};

CliConfig LoadConfig(const Globals& g) {
  std::string path = g.config_path;
  if (path.empty()) {
    if (const char* env = std::getenv("TRINITY_CONFIG")) path = env;
  }
  if (path.empty()) {
    if (const char* home = std::getenv("HOME")) path = std::string(home) + "/.trinity-lite.toml";
  }
  CliConfig c;
  if (!path.empty() && fs::exists(path)) {
    c = trinity::cli::ParseConfigText(trinity::util::ReadTextFile(path));
  } else if (!g.config_path.empty()) {
    throw CliError(trinity::cli::kExitValidation, "config file '" + path + "' not found");
  }
  trinity::cli::ApplyEnvOverrides(c, std::getenv("TRINITY_SERVER"), std::getenv("TRINITY_TOKEN"));
  if (!g.server.empty()) c.server_url = g.server;
  if (!g.token.empty()) c.token = g.token;
  trinity::cli::ValidateServerUrl(c.server_url);
  return c;
}

std::string ReadFileArg(const std::string& path) {
  if (!fs::exists(path)) throw CliError(trinity::cli::kExitValidation, "no such file: " + path);
  return trinity::util::ReadTextFile(path);
}

json ReadJsonFile(const std::string& path) {
  json j = json::parse(ReadFileArg(path), nullptr, false);
  if (j.is_discarded()) throw CliError(trinity::cli::kExitValidation, path + " is not valid JSON");
  return j;
}

std::vector<std::string> SplitList(const std::string& s, char sep = ',') {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    if (ch == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

std::vector<double> ParseNumbers(const std::string& s, std::size_t n, const char* what) {
  std::vector<double> out;
  try {
    for (const auto& part : SplitList(s)) out.push_back(std::stod(part));
  } catch (const std::exception&) {
    out.clear();
  }
  if (out.size() != n) {
    throw CliError(trinity::cli::kExitValidation,
                   std::string(what) + " needs " + std::to_string(n) + " comma-separated numbers");
  }
  return out;
}

std::string Scalar(const json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); }

void PrintHuman(const json& j) {
  if (j.is_array()) {
    for (const auto& item : j) std::cout << item.dump() << "\n";
    return;
  }
  if (!j.is_object()) {
    std::cout << Scalar(j) << "\n";
    return;
  }
  for (const auto& [key, value] : j.items()) {
    std::string text = value.is_structured() ? value.dump() : Scalar(value);
    if (text.size() > 100) text = "[" + std::to_string(value.size()) + " entries]";
    std::cout << key << ": " << text << "\n";
  }
}

class Output {
 public:
  explicit Output(const Globals& g) : g_(g) {}

  void Print(const json& j, const std::function<void(const json&)>& human = PrintHuman) const {
    if (g_.json) {
      std::cout << j.dump() << std::endl;
    } else {
      human(j);
      std::cout.flush();
    }
  }

 private:
  const Globals& g_;
};

// Prints a job, waiting for it first when asked. A failed job is a
// server-side failure.
int FinishJob(const ApiClient& api, const Globals& g, const json& job, bool wait) {
  const Output out(g);
  json final_job = job;
  if (wait) {
    final_job = api.WaitForJob(job.at("job_id").get<std::string>(),
                               std::chrono::milliseconds(g.poll_ms));
  }
  out.Print(final_job, [](const json& j) {
    std::cout << j.value("job_id", "") << "  " << j.value("type", "") << "  "
              << j.value("status", "") << "\n";
    if (!j.value("error", "").empty()) std::cout << "error: " << j["error"].get<std::string>() << "\n";
    if (j.contains("result") && !j["result"].empty()) {
      std::cout << "result: " << j["result"].dump() << "\n";
    }
  });
  if (final_job.value("status", "") == "failed") {
    std::cerr << "job " << final_job.value("job_id", "") << " failed: "
              << final_job.value("error", "") << "\n";
    return trinity::cli::kExitServer;
  }
  return trinity::cli::kExitOk;
}

void PrintExperiment(const json& e) {
  std::cout << e.value("experiment_id", "") << "  " << e.value("state", "") << "\n";
  for (const char* key : {"project_id", "name", "label_set_id", "architecture_id", "parent_id"}) {
    if (e.contains(key) && !e[key].is_null()) std::cout << key << ": " << Scalar(e[key]) << "\n";
  }
  for (const char* key : {"profile_ids", "tags", "lineage", "checkpoints", "prediction_job_ids",
                          "hyperparams"}) {
    if (e.contains(key)) std::cout << key << ": " << e[key].dump() << "\n";
  }
}

// ---- offline commands ----

int IngestProfile(const Globals& g, const std::string& dir, const std::string& data_root,
                  const std::string& profile_id) {
  const fs::path root(dir);
  json meta_json = ReadJsonFile((root / "profile.json").string());
  if (!profile_id.empty()) meta_json["profile_id"] = profile_id;
  auto meta = meta_json.get<trinity::store::ProfileMeta>();
  trinity::store::ChannelStore store(fs::path(data_root) / "store");
  store.RegisterProfile(meta);
  std::size_t tiles = 0;
  std::vector<fs::path> files;
  for (const auto& entry : fs::recursive_directory_iterator(root)) {
    if (entry.is_regular_file() && entry.path().extension() == ".trc") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  for (const auto& file : files) {
    // <dir>/[<date>/]16/<x>/<y>.trc
    const fs::path rel = fs::relative(file, root);
    std::vector<std::string> parts;
    for (const auto& p : rel) parts.push_back(p.string());
    std::optional<std::string> date;
    if (parts.size() == 4) {
      date = parts[0];
    } else if (parts.size() != 3) {
      throw CliError(trinity::cli::kExitValidation,
                     "unexpected tile path " + rel.string() + "; want [<date>/]16/<x>/<y>.trc");
    }
    const auto record = trinity::store::DecodeTrc(trinity::util::ReadBinaryFile(file));
    store.PutTile(meta.profile_id, date, record);
    ++tiles;
  }
  Output(g).Print(json{{"profile_id", meta.profile_id},
                       {"channel_count", meta.channel_count},
                       {"tiles", tiles}});
  return 0;
}

int Inspect(const Globals& g, const std::string& kind, const std::string& file) {
  if (!fs::exists(file)) throw CliError(trinity::cli::kExitValidation, "no such file: " + file);
  const auto bytes = trinity::util::ReadBinaryFile(file);
  json out;
  if (kind == "trc") {
    const auto h = trinity::store::InspectTrc(bytes);
    out = {{"format", "trc"},     {"version", h.version},
           {"tile_zoom", h.tile_zoom}, {"tile", json::array({h.tile.x, h.tile.y})},
           {"channel_count", h.channel_count}, {"nnz", h.nnz}};
  } else if (kind == "trhm") {
    const auto h = trinity::inference::InspectHeatmap(bytes);
    out = {{"format", "trhm"},
           {"version", h.version},
           {"tile", json::array({h.tile.x, h.tile.y})},
           {"class_counts", h.class_counts}};
  } else {
    out = trinity::kernel::InspectCheckpoint(bytes);
    out["format"] = "trnk";
  }
  Output(g).Print(out, [](const json& j) { std::cout << j.dump(2) << "\n"; });
  return 0;
}

struct ServeArgs {
  std::string data_root = "./trinity-data";
  std::string host = "127.0.0.1";
  int port = 8080;
  std::string token;
  std::size_t job_workers = 2;
  std::size_t predict_workers = 2;
  std::size_t train_threads = 1;
  std::string static_dir;
  std::string port_file;
};

int Serve(const Globals& g, const ServeArgs& a) {
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  std::string token = a.token;
  if (token.empty()) {
    if (const char* env = std::getenv("TRINITY_TOKEN")) token = env;
  }
  if (token.empty()) token = g.token;

  trinity::service::PlatformOptions opt;
  opt.data_root = a.data_root;
  opt.job_workers = a.job_workers;
  opt.predict_workers = a.predict_workers;
  opt.train_threads = a.train_threads;
  trinity::service::Platform platform(opt);
  trinity::service::HttpServer server(platform, token, a.static_dir);
  const int port = server.Bind(a.host, a.port);
  if (!a.port_file.empty()) trinity::util::AtomicWriteFile(a.port_file, std::to_string(port) + "\n");
  std::cout << "listening on http://" << a.host << ":" << port << std::endl;

  std::thread([&server, signals] {
    int sig = 0;
    sigwait(&signals, &sig);
    server.Stop();
  }).detach();
  server.Listen();
  std::cout << "shutting down" << std::endl;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"trinity: geospatial segmentation platform"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--config", g.config_path, "key=value config file (default ~/.trinity-lite.toml)");
  app.add_option("--server", g.server, "service URL, overrides TRINITY_SERVER");
  app.add_option("--token", g.token, "bearer token, overrides TRINITY_TOKEN");
  app.add_flag("--json", g.json, "machine-readable JSON output");
  app.add_option("--poll-ms", g.poll_ms, "job polling interval for --wait")->check(CLI::PositiveNumber);

  std::function<int()> action;
  const auto api = [&g] { return ApiClient(LoadConfig(g)); };
  const Output out(g);

  // serve
  ServeArgs serve;
  auto* serve_cmd = app.add_subcommand("serve", "run the HTTP service");
  serve_cmd->add_option("--data-root", serve.data_root, "data directory");
  serve_cmd->add_option("--host", serve.host);
  serve_cmd->add_option("--port", serve.port, "0 picks a free port");
  serve_cmd->add_option("--job-workers", serve.job_workers);
  serve_cmd->add_option("--predict-workers", serve.predict_workers);
  serve_cmd->add_option("--train-threads", serve.train_threads);
  serve_cmd->add_option("--static-dir", serve.static_dir, "web client files served at /");
  serve_cmd->add_option("--port-file", serve.port_file, "write the bound port here");
  serve_cmd->add_option("--auth-token", serve.token, "required bearer token");
  serve_cmd->callback([&] { action = [&] { return Serve(g, serve); }; });

  // catalog
  auto* catalog = app.add_subcommand("catalog", "profile and architecture catalogs");
  catalog->require_subcommand(1);
  catalog->add_subcommand("list", "list profiles and architectures")->callback([&] {
    action = [&] {
      const auto c = api();
      const json j{{"profiles", c.Get("/api/catalog/profiles")},
                   {"architectures", c.Get("/api/catalog/architectures")}};
      out.Print(j, [](const json& j) {
        std::cout << "profiles:\n";
        for (const auto& p : j["profiles"]) {
          std::cout << "  " << p["profile_id"].get<std::string>() << "  channels "
                    << p["channel_count"] << (p.value("temporal", false) ? "  temporal" : "")
                    << "\n";
        }
        std::cout << "architectures:\n";
        for (const auto& a : j["architectures"]) {
          std::cout << "  " << a["architecture_id"].get<std::string>() << "  "
                    << a["description"].get<std::string>() << "\n";
        }
      });
      return 0;
    };
  });

  // profile
  auto* profile = app.add_subcommand("profile", "channel profiles");
  profile->require_subcommand(1);
  std::string ingest_dir, ingest_root = "./trinity-data", ingest_id;
  auto* ingest = profile->add_subcommand("ingest", "register a profile directory into a data root");
  ingest->add_option("dir", ingest_dir, "directory with profile.json and [<date>/]16/<x>/<y>.trc")
      ->required();
  ingest->add_option("--data-root", ingest_root, "data root of the service");
  ingest->add_option("--profile-id", ingest_id, "override the id in profile.json");
  ingest->callback([&] { action = [&] { return IngestProfile(g, ingest_dir, ingest_root, ingest_id); }; });
  std::string fp_job, fp_id, fp_desc;
  auto* from_pred = profile->add_subcommand("from-prediction", "store a prediction as a profile");
  from_pred->add_option("job", fp_job)->required();
  from_pred->add_option("--profile-id", fp_id)->required();
  from_pred->add_option("--description", fp_desc);
  from_pred->callback([&] {
    action = [&] {
      out.Print(api().Post("/api/predictions/" + fp_job + "/profile",
                           {{"profile_id", fp_id}, {"description", fp_desc}}));
      return 0;
    };
  });

  // project
  auto* project = app.add_subcommand("project", "projects");
  project->require_subcommand(1);
  std::string proj_name, proj_desc, proj_id;
  auto* proj_create = project->add_subcommand("create", "create a project");
  proj_create->add_option("--name", proj_name)->required();
  proj_create->add_option("--description", proj_desc);
  proj_create->callback([&] {
    action = [&] {
      out.Print(api().Post("/api/projects", {{"name", proj_name}, {"description", proj_desc}}),
                [](const json& j) { std::cout << j["project_id"].get<std::string>() << "\n"; });
      return 0;
    };
  });
  project->add_subcommand("list", "list projects")->callback([&] {
    action = [&] {
      out.Print(api().Get("/api/projects"));
      return 0;
    };
  });
  auto* proj_show = project->add_subcommand("show", "show a project and its experiments");
  proj_show->add_option("id", proj_id)->required();
  proj_show->callback([&] {
    action = [&] {
      out.Print(api().Get("/api/projects/" + proj_id), [](const json& j) {
        std::cout << j["project_id"].get<std::string>() << "  " << j["name"].get<std::string>()
                  << "\n";
        for (const auto& e : j["experiments"]) {
          std::cout << "  " << e["experiment_id"].get<std::string>() << "  "
                    << e["state"].get<std::string>() << "  " << e["name"].get<std::string>()
                    << "\n";
        }
      });
      return 0;
    };
  });

  // labels
  auto* labels_cmd = app.add_subcommand("labels", "label sets and labeling tasks");
  labels_cmd->require_subcommand(1);
  std::string up_file, up_id, up_tasks = "target:2", up_region, up_target;
  auto* upload = labels_cmd->add_subcommand("upload", "upload a WKT label file");
  upload->add_option("file", up_file)->required();
  upload->add_option("--label-set-id", up_id)->required();
  upload->add_option("--tasks", up_tasks, "name:class_count[,name:class_count...]");
  upload->add_option("--region", up_region, "labeled region min_lon,min_lat,max_lon,max_lat")
      ->required();
  upload->add_option("--target-task", up_target, "task receiving the geometries (default first)");
  upload->callback([&] {
    action = [&] {
      json tasks = json::array();
      for (const auto& t : SplitList(up_tasks)) {
        const auto parts = SplitList(t, ':');
        if (parts.size() != 2) {
          throw CliError(trinity::cli::kExitValidation, "task '" + t + "' must be name:class_count");
        }
        tasks.push_back({{"task_name", parts[0]}, {"class_count", std::stoi(parts[1])}});
      }
      const auto region = ParseNumbers(up_region, 4, "--region");
      const std::vector<trinity::cli::FormPart> parts = {
          {"file", ReadFileArg(up_file), fs::path(up_file).filename().string(), "text/plain"},
          {"label_set_id", up_id, "", ""},
          {"tasks", tasks.dump(), "", ""},
          {"labeled_region", json(region).dump(), "", ""},
          {"target_task", up_target, "", ""}};
      out.Print(api().PostForm("/api/labels/upload", parts));
      return 0;
    };
  });
  labels_cmd->add_subcommand("tasks", "list labeling tasks")->callback([&] {
    action = [&] {
      out.Print(api().Get("/api/labels/tasks"));
      return 0;
    };
  });
  std::string ann_task, ann_file;
  auto* annotate = labels_cmd->add_subcommand("annotate", "submit WKT annotations for a task");
  annotate->add_option("task_id", ann_task)->required();
  annotate->add_option("file", ann_file)->required();
  annotate->callback([&] {
    action = [&] {
      out.Print(api().Post("/api/labels/tasks/" + ann_task + "/annotations",
                           {{"wkt", ReadFileArg(ann_file)}}));
      return 0;
    };
  });
  std::string show_set;
  auto* labels_show = labels_cmd->add_subcommand("show", "show a label set");
  labels_show->add_option("label_set_id", show_set)->required();
  labels_show->callback([&] {
    action = [&] {
      out.Print(api().Get("/api/labels/sets/" + show_set));
      return 0;
    };
  });

  // exp
  auto* exp = app.add_subcommand("exp", "experiments");
  exp->require_subcommand(1);
  struct CreateArgs {
    std::string project, config_file, name, label_set, profiles, arch;
    std::optional<int> epochs, batch, checkpoint_every;
    std::optional<double> lr, val_fraction;
    std::optional<std::uint64_t> init_seed, split_seed;
    std::vector<std::string> date_ranges;
  } ca;
  auto* create = exp->add_subcommand("create", "create an experiment");
  create->add_option("--project", ca.project)->required();
  create->add_option("--config", ca.config_file, "JSON file with experiment config keys");
  create->add_option("--name", ca.name);
  create->add_option("--label-set", ca.label_set);
  create->add_option("--profiles", ca.profiles, "comma-separated profile ids");
  create->add_option("--arch", ca.arch);
  create->add_option("--epochs", ca.epochs);
  create->add_option("--lr", ca.lr);
  create->add_option("--batch-size", ca.batch);
  create->add_option("--init-seed", ca.init_seed);
  create->add_option("--val-fraction", ca.val_fraction);
  create->add_option("--split-seed", ca.split_seed);
  create->add_option("--checkpoint-every", ca.checkpoint_every);
  create->add_option("--date-range", ca.date_ranges, "profile=YYYY-MM-DD..YYYY-MM-DD");
  create->callback([&] {
    action = [&] {
      json cfg = ca.config_file.empty() ? json::object() : ReadJsonFile(ca.config_file);
      if (!ca.name.empty()) cfg["name"] = ca.name;
      if (!ca.label_set.empty()) cfg["label_set_id"] = ca.label_set;
      if (!ca.profiles.empty()) cfg["profile_ids"] = SplitList(ca.profiles);
      if (!ca.arch.empty()) cfg["architecture_id"] = ca.arch;
      json hp = cfg.value("hyperparams", json::object());
      if (ca.epochs) hp["epochs"] = *ca.epochs;
      if (ca.lr) hp["learning_rate"] = *ca.lr;
      if (ca.batch) hp["batch_size"] = *ca.batch;
      if (ca.init_seed) hp["init_seed"] = *ca.init_seed;
      if (!hp.empty()) cfg["hyperparams"] = hp;
      if (ca.val_fraction) cfg["val_fraction"] = *ca.val_fraction;
      if (ca.split_seed) cfg["split_seed"] = *ca.split_seed;
      if (ca.checkpoint_every) cfg["checkpoint_every"] = *ca.checkpoint_every;
      for (const auto& dr : ca.date_ranges) {
        const auto eq = dr.find('=');
        const auto dots = dr.find("..");
        if (eq == std::string::npos || dots == std::string::npos || dots < eq) {
          throw CliError(trinity::cli::kExitValidation,
                         "--date-range must be profile=YYYY-MM-DD..YYYY-MM-DD");
        }
        cfg["date_ranges"][dr.substr(0, eq)] =
            json::array({dr.substr(eq + 1, dots - eq - 1), dr.substr(dots + 2)});
      }
      out.Print(api().Post("/api/projects/" + ca.project + "/experiments", cfg),
                [](const json& j) { std::cout << j["experiment_id"].get<std::string>() << "\n"; });
      return 0;
    };
  });

  std::string exp_id;
  auto* status = exp->add_subcommand("status", "show an experiment");
  status->add_option("id", exp_id)->required();
  status->callback([&] {
    action = [&] {
      out.Print(api().Get("/api/experiments/" + exp_id), PrintExperiment);
      return 0;
    };
  });

  std::string clone_file;
  std::vector<std::string> clone_sets;
  auto* clone = exp->add_subcommand("clone", "clone an experiment with overrides");
  clone->add_option("id", exp_id)->required();
  clone->add_option("--overrides", clone_file, "JSON file of config overrides");
  clone->add_option("--set", clone_sets, "key=<JSON value> override");
  clone->callback([&] {
    action = [&] {
      json overrides = clone_file.empty() ? json::object() : ReadJsonFile(clone_file);
      for (const auto& s : clone_sets) {
        const auto eq = s.find('=');
        if (eq == std::string::npos) {
          throw CliError(trinity::cli::kExitValidation, "--set must be key=value");
        }
        json v = json::parse(s.substr(eq + 1), nullptr, false);
        overrides[s.substr(0, eq)] = v.is_discarded() ? json(s.substr(eq + 1)) : v;
      }
      out.Print(api().Post("/api/experiments/" + exp_id + "/clone", overrides),
                [](const json& j) { std::cout << j["experiment_id"].get<std::string>() << "\n"; });
      return 0;
    };
  });

  std::vector<std::string> patch_tags;
  std::optional<std::string> patch_notes;
  auto* patch = exp->add_subcommand("patch", "set tags and notes");
  patch->add_option("id", exp_id)->required();
  patch->add_option("--tags", patch_tags)->delimiter(',');
  patch->add_option("--notes", patch_notes);
  patch->callback([&] {
    action = [&] {
      json body = json::object();
      if (!patch_tags.empty()) body["tags"] = patch_tags;
      if (patch_notes) body["notes"] = *patch_notes;
      out.Print(api().Patch("/api/experiments/" + exp_id, body), PrintExperiment);
      return 0;
    };
  });

  auto* reset = exp->add_subcommand("reset", "move a FAILED experiment back to DRAFT");
  reset->add_option("id", exp_id)->required();
  reset->callback([&] {
    action = [&] {
      out.Print(api().Post("/api/experiments/" + exp_id + "/reset", json::object()),
                PrintExperiment);
      return 0;
    };
  });

  bool wait = false;
  std::string idem_key;
  const auto run_headers = [&] {
    std::map<std::string, std::string> h;
    if (!idem_key.empty()) h["Idempotency-Key"] = idem_key;
    return h;
  };
  auto* dataprep = exp->add_subcommand("dataprep", "build the experiment's dataset");
  dataprep->add_option("id", exp_id)->required();
  dataprep->add_flag("--wait", wait);
  dataprep->add_option("--idempotency-key", idem_key);
  dataprep->callback([&] {
    action = [&] {
      const auto c = api();
      return FinishJob(c, g, c.Post("/api/experiments/" + exp_id + "/dataprep", json::object(),
                                    run_headers()),
                       wait);
    };
  });

  bool warm_latest = false;
  std::string warm_from;
  std::optional<int> train_epochs;
  auto* train = exp->add_subcommand("train", "train the experiment's model");
  train->add_option("id", exp_id)->required();
  train->add_flag("--warm-start", warm_latest, "continue from the latest own checkpoint");
  train->add_option("--warm-from", warm_from, "<experiment_id>[:<epoch>] checkpoint to start from");
  train->add_option("--epochs", train_epochs, "epochs for this run");
  train->add_flag("--wait", wait);
  train->add_option("--idempotency-key", idem_key);
  train->callback([&] {
    action = [&] {
      json args = json::object();
      if (warm_latest) args["warm_start"] = true;
      if (!warm_from.empty()) {
        const auto colon = warm_from.find(':');
        json ws{{"experiment_id", warm_from.substr(0, colon)}};
        if (colon != std::string::npos) ws["epoch"] = std::stoi(warm_from.substr(colon + 1));
        args["warm_start"] = ws;
      }
      if (train_epochs) args["epochs"] = *train_epochs;
      const auto c = api();
      return FinishJob(c, g, c.Post("/api/experiments/" + exp_id + "/train", args, run_headers()),
                       wait);
    };
  });

  std::string bbox;
  std::optional<int> pred_epoch;
  bool no_png = false;
  auto* predict = exp->add_subcommand("predict", "predict heatmaps over a region");
  predict->add_option("id", exp_id)->required();
  predict->add_option("--bbox", bbox, "min_lon,min_lat,max_lon,max_lat")->required();
  predict->add_option("--epoch", pred_epoch, "checkpoint epoch (default latest)");
  predict->add_flag("--no-png", no_png, "skip PNG rendering");
  predict->add_flag("--wait", wait);
  predict->add_option("--idempotency-key", idem_key);
  predict->callback([&] {
    action = [&] {
      json args{{"bbox", ParseNumbers(bbox, 4, "--bbox")}, {"render_png", !no_png}};
      if (pred_epoch) args["epoch"] = *pred_epoch;
      const auto c = api();
      return FinishJob(c, g, c.Post("/api/experiments/" + exp_id + "/predict", args, run_headers()),
                       wait);
    };
  });

  auto* metrics = exp->add_subcommand("metrics", "training metric history");
  metrics->add_option("id", exp_id)->required();
  metrics->callback([&] {
    action = [&] {
      const std::string text = api().GetText("/api/experiments/" + exp_id + "/metrics");
      if (g.json) {
        std::cout << text << std::flush;
        return 0;
      }
      std::istringstream in(text);
      std::string line;
      while (std::getline(in, line)) {
        if (line.empty()) continue;
        const json m = json::parse(line);
        std::cout << "epoch " << m["epoch"] << "  " << m["split"].get<std::string>() << "  loss "
                  << m["loss"];
        for (const auto& t : m["tasks"]) {
          std::cout << "  " << t["task_name"].get<std::string>() << " fiou " << t["fiou"]
                    << " f1 " << t["f1"];
        }
        std::cout << "\n";
      }
      return 0;
    };
  });

  // job
  auto* job = app.add_subcommand("job", "jobs");
  job->require_subcommand(1);
  std::string job_id;
  auto* job_status = job->add_subcommand("status", "show a job");
  job_status->add_option("id", job_id)->required();
  job_status->add_flag("--wait", wait);
  job_status->callback([&] {
    action = [&] {
      const auto c = api();
      return FinishJob(c, g, c.Get("/api/jobs/" + job_id), wait);
    };
  });

  job->add_subcommand("list", "list jobs")->callback([&] {
    action = [&] {
      out.Print(api().Get("/api/jobs"));
      return 0;
    };
  });

  // automl
  auto* automl = app.add_subcommand("automl", "hyperparameter search");
  automl->require_subcommand(1);
  struct AutomlArgs {
    int trials = 4;
    int parallelism = 1;
    std::uint64_t seed = 0;
    std::string lr_range, batch_sizes;
    std::optional<int> epochs;
  } aa;
  auto* automl_run = automl->add_subcommand("run", "run a random search and keep the best model");
  automl_run->add_option("id", exp_id)->required();
  automl_run->add_option("--trials", aa.trials);
  automl_run->add_option("--parallelism", aa.parallelism);
  automl_run->add_option("--seed", aa.seed);
  automl_run->add_option("--lr-range", aa.lr_range, "lo,hi");
  automl_run->add_option("--batch-sizes", aa.batch_sizes, "comma-separated");
  automl_run->add_option("--epochs", aa.epochs);
  automl_run->add_flag("--wait", wait);
  automl_run->add_option("--idempotency-key", idem_key);
  automl_run->callback([&] {
    action = [&] {
      json args{{"n_trials", aa.trials}, {"parallelism", aa.parallelism}, {"seed", aa.seed}};
      json space = json::object();
      if (!aa.lr_range.empty()) space["learning_rate"] = ParseNumbers(aa.lr_range, 2, "--lr-range");
      if (!aa.batch_sizes.empty()) {
        json sizes = json::array();
        for (const auto& s : SplitList(aa.batch_sizes)) sizes.push_back(std::stoi(s));
        space["batch_size"] = sizes;
      }
      if (!space.empty()) {
        if (!space.contains("learning_rate")) space["learning_rate"] = {1e-4, 1e-2};
        if (!space.contains("batch_size")) space["batch_size"] = {2, 4, 8};
        args["search_space"] = space;
      }
      if (aa.epochs) args["epochs"] = *aa.epochs;
      const auto c = api();
      return FinishJob(c, g, c.Post("/api/experiments/" + exp_id + "/automl", args, run_headers()),
                       wait);
    };
  });

  // post
  auto* post = app.add_subcommand("post", "post-process a prediction");
  post->require_subcommand(1);
  struct PostArgs {
    std::string job, task, network_file, predicate, source = "vectorize", out_file, wkt_file;
    int class_index = 1;
    double tau = 0.5, eps = 1.5, min_weight = 4.0, radius_m = 5.0, score_tau = 0.0;
  } pa;
  const auto post_common = [&](CLI::App* cmd) {
    cmd->add_option("job", pa.job, "prediction job id")->required();
    cmd->add_option("--task", pa.task, "task name (default first)");
    cmd->add_option("--class", pa.class_index);
    cmd->add_option("--tau", pa.tau, "confidence threshold");
    cmd->add_option("--eps", pa.eps, "DBSCAN radius in pixels");
    cmd->add_option("--min-weight", pa.min_weight, "DBSCAN core weight");
    cmd->add_option("--network", pa.network_file, "road network file for mapmatch");
    cmd->add_option("--radius-m", pa.radius_m);
    cmd->add_option("--score-tau", pa.score_tau);
    cmd->add_option("--out", pa.out_file, "write GeoJSON here");
    cmd->add_option("--wkt-out", pa.wkt_file, "write WKT here");
  };
  const auto post_run = [&](const std::string& op) {
    json req{{"op", op},          {"class_index", pa.class_index}, {"tau", pa.tau},
             {"eps", pa.eps},     {"min_weight", pa.min_weight},   {"radius_m", pa.radius_m},
             {"score_tau", pa.score_tau}};
    if (!pa.task.empty()) req["task"] = pa.task;
    if (op == "mapmatch" || (op == "filter" && pa.source == "mapmatch")) {
      if (pa.network_file.empty()) {
        throw CliError(trinity::cli::kExitValidation, "--network is required for map matching");
      }
      req["network"] = ReadFileArg(pa.network_file);
    }
    if (op == "filter") {
      req["predicate"] = pa.predicate;
      req["source"] = pa.source;
    }
    const json res = api().Post("/api/predictions/" + pa.job + "/postprocess", req);
    if (!pa.out_file.empty()) trinity::util::AtomicWriteFile(pa.out_file, res["geojson"].dump(2));
    if (!pa.wkt_file.empty()) {
      trinity::util::AtomicWriteFile(pa.wkt_file, res["wkt"].get<std::string>());
    }
    out.Print(res, [](const json& j) {
      std::cout << j["op"].get<std::string>() << ": " << j["count"] << " features from "
                << j["points"] << " pixels\n"
                << j["wkt"].get<std::string>();
    });
    return 0;
  };
  for (const std::string op : {"vectorize", "mapmatch", "filter"}) {
    auto* cmd = post->add_subcommand(op, op == "vectorize"  ? "cluster pixels into polygons"
                                         : op == "mapmatch" ? "score road segments"
                                                            : "filter features by predicate");
    post_common(cmd);
    if (op == "filter") {
      cmd->add_option("--predicate", pa.predicate, "e.g. \"score >= 0.8 && area_px > 10\"")
          ->required();
      cmd->add_option("--source", pa.source, "vectorize or mapmatch");
    }
    cmd->callback([&, op] { action = [&, op] { return post_run(op); }; });
  }

  // eval
  auto* eval = app.add_subcommand("eval", "evaluate predictions");
  eval->require_subcommand(1);
  std::string golden_file;
  auto* golden = eval->add_subcommand("golden", "pixelwise metrics against a golden WKT file");
  golden->add_option("job", pa.job, "prediction job id")->required();
  golden->add_option("--golden", golden_file)->required();
  golden->add_option("--task", pa.task)->required();
  golden->add_option("--class", pa.class_index);
  golden->add_option("--tau", pa.tau);
  golden->callback([&] {
    action = [&] {
      out.Print(api().Post("/api/predictions/" + pa.job + "/evaluate",
                           {{"golden_wkt", ReadFileArg(golden_file)},
                            {"task", pa.task},
                            {"class_index", pa.class_index},
                            {"tau", pa.tau}}));
      return 0;
    };
  });

  // al
  auto* al = app.add_subcommand("al", "active learning");
  al->require_subcommand(1);
  int al_k = 0;
  std::string al_task, round_id;
  auto* al_select = al->add_subcommand("select", "pick the least confident tiles for labeling");
  al_select->add_option("job", pa.job, "prediction job id")->required();
  al_select->add_option("--k", al_k)->required();
  al_select->add_option("--task", al_task, "task to label (default first)");
  al_select->callback([&] {
    action = [&] {
      json body{{"k", al_k}};
      if (!al_task.empty()) body["target_task"] = al_task;
      const json r = api().Post("/api/predictions/" + pa.job + "/active-learning", body);
      out.Print(r, [](const json& j) {
        std::cout << j["round_id"].get<std::string>() << "  label task "
                  << j["label_task_id"].get<std::string>() << "  label set "
                  << j["label_set_id"].get<std::string>() << "\n";
        for (const auto& t : j["tiles"]) {
          std::cout << "  16/" << t["tile"][0] << "/" << t["tile"][1] << "  uncertainty "
                    << t["uncertainty"] << "\n";
        }
        if (!j.value("warning", "").empty()) {
          std::cout << "warning: " << j["warning"].get<std::string>() << "\n";
        }
      });
      return 0;
    };
  });
  auto* al_complete = al->add_subcommand("complete", "clone the experiment with the new labels");
  al_complete->add_option("round", round_id)->required();
  al_complete->callback([&] {
    action = [&] {
      out.Print(api().Post("/api/active-learning/" + round_id + "/complete", json::object()),
                PrintExperiment);
      return 0;
    };
  });

  // inspect
  auto* inspect = app.add_subcommand("inspect", "print a binary file's header");
  inspect->require_subcommand(1);
  std::string inspect_file;
  for (const std::string kind : {"trc", "trhm", "trnk"}) {
    auto* cmd = inspect->add_subcommand(kind, "inspect a ." + kind + " file");
    cmd->add_option("file", inspect_file)->required();
    cmd->callback([&, kind] { action = [&, kind] { return Inspect(g, kind, inspect_file); }; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : trinity::cli::kExitValidation;
  }
  try {
    return action ? action() : 0;
  } catch (const CliError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.exit_code();
  } catch (const trinity::Error& e) {
    std::cerr << "error: " << trinity::ErrorCodeName(e.code()) << ": " << e.what() << "\n";
    return e.code() == trinity::ErrorCode::kInternal ? trinity::cli::kExitServer
                                                     : trinity::cli::kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return trinity::cli::kExitValidation;
  }
}
