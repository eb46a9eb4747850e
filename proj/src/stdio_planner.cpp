#include <cerrno>
#include <csignal>
#include <cstring>
#include <map>

#include <fcntl.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include <fmt/format.h>

#include "pedmotion/error.hpp"
#include "pedmotion/planner.hpp"
#include "planner_protocol.hpp"

extern char** environ;

namespace pedmotion {

struct StdioPlanner::Impl {
  pid_t pid = -1;
  int to_child = -1;
  int from_child = -1;
  std::string buffer;
  std::string name = "stdio";
  std::string command;
  std::map<std::string, std::vector<Vec2>> predictions;

  void send(const Json& msg) {
    const std::string line = dump_line(msg) + "\n";
    std::size_t off = 0;
    while (off < line.size()) {
      const ssize_t n = ::write(to_child, line.data() + off, line.size() - off);
      if (n < 0) {
        if (errno == EINTR) continue;
        fail(ErrorCode::Processing, fmt::format("planner '{}': write failed: {}", command, std::strerror(errno)));
      }
      off += static_cast<std::size_t>(n);
    }
  }

  Json receive() {
    for (;;) {
      const auto nl = buffer.find('\n');
      if (nl != std::string::npos) {
        std::string line = buffer.substr(0, nl);
        buffer.erase(0, nl + 1);
        if (line.empty()) continue;
        return parse_json(line, fmt::format("planner '{}' reply", command));
      }
      char chunk[4096];
      const ssize_t n = ::read(from_child, chunk, sizeof chunk);
      if (n < 0 && errno == EINTR) continue;
      if (n <= 0) fail(ErrorCode::Processing, fmt::format("planner '{}' closed its output", command));
      buffer.append(chunk, static_cast<std::size_t>(n));
    }
  }
};

StdioPlanner::StdioPlanner(std::vector<std::string> argv) : impl_(std::make_unique<Impl>()) {
  if (argv.empty()) fail(ErrorCode::InvalidInput, "stdio planner: empty command");
  impl_->command = argv.front();
  std::signal(SIGPIPE, SIG_IGN);

  int in_pipe[2];
  int out_pipe[2];
  if (::pipe(in_pipe) != 0) fail(ErrorCode::Processing, "stdio planner: pipe failed");
  if (::pipe(out_pipe) != 0) {
    ::close(in_pipe[0]);
    ::close(in_pipe[1]);
    fail(ErrorCode::Processing, "stdio planner: pipe failed");
  }
  ::fcntl(in_pipe[1], F_SETFD, FD_CLOEXEC);
  ::fcntl(out_pipe[0], F_SETFD, FD_CLOEXEC);

  posix_spawn_file_actions_t actions;
  posix_spawn_file_actions_init(&actions);
  posix_spawn_file_actions_adddup2(&actions, in_pipe[0], STDIN_FILENO);
  posix_spawn_file_actions_adddup2(&actions, out_pipe[1], STDOUT_FILENO);
  posix_spawn_file_actions_addclose(&actions, in_pipe[0]);
  posix_spawn_file_actions_addclose(&actions, out_pipe[1]);

  std::vector<char*> args;
  for (std::string& a : argv) args.push_back(a.data());
  args.push_back(nullptr);
  const int rc = posix_spawnp(&impl_->pid, args[0], &actions, nullptr, args.data(), environ);
  posix_spawn_file_actions_destroy(&actions);
  ::close(in_pipe[0]);
  ::close(out_pipe[1]);
  if (rc != 0) {
    ::close(in_pipe[1]);
    ::close(out_pipe[0]);
    fail(ErrorCode::Processing, fmt::format("stdio planner: cannot start '{}': {}", impl_->command, std::strerror(rc)));
  }
  impl_->to_child = in_pipe[1];
  impl_->from_child = out_pipe[0];
}

StdioPlanner::~StdioPlanner() {
  if (impl_->to_child >= 0) ::close(impl_->to_child);
  if (impl_->from_child >= 0) ::close(impl_->from_child);
  if (impl_->pid > 0) {
    int status = 0;
    ::waitpid(impl_->pid, &status, 0);
  }
}

std::string StdioPlanner::name() const { return impl_->name; }

void StdioPlanner::reset(std::uint64_t seed) {
  impl_->send(Json{{"type", "reset"}, {"seed", seed}});
  const Json reply = impl_->receive();
  if (reply.value("type", "") != "ready") {
    fail(ErrorCode::Processing, fmt::format("planner '{}': expected ready, got {}", impl_->command, dump_line(reply)));
  }
  impl_->name = reply.value("name", impl_->command);
}

Control StdioPlanner::observe(const Observation& obs) {
  impl_->send(protocol::encode(obs));
  protocol::ControlMessage msg = protocol::decode_control(impl_->receive());
  impl_->predictions = std::move(msg.predictions);
  return msg.control;
}

std::optional<std::vector<Vec2>> StdioPlanner::predict(const std::string& pedestrian_id) {
  const auto it = impl_->predictions.find(pedestrian_id);
  if (it == impl_->predictions.end()) return std::nullopt;
  return it->second;
}

}  // namespace pedmotion
