#include "process.hpp"

#include <fcntl.h>
#include <poll.h>
#include <sched.h>
#include <signal.h>
#include <sys/resource.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <mutex>
#include <thread>

#include "f2s/sandbox/sandbox.hpp"

extern char** environ;

namespace f2s::sandbox::detail {

std::optional<std::filesystem::path> find_executable(const std::string& name) {
  if (name.empty()) return std::nullopt;
  auto runnable = [](const std::filesystem::path& p) {
    return ::access(p.c_str(), X_OK) == 0 && !std::filesystem::is_directory(p);
  };
  if (name.find('/') != std::string::npos) {
    if (runnable(name)) return std::filesystem::absolute(name);
    return std::nullopt;
  }
  const char* path = std::getenv("PATH");
  std::string dirs = path ? path : "/usr/local/bin:/usr/bin:/bin";
  std::size_t start = 0;
  while (start <= dirs.size()) {
    auto end = dirs.find(':', start);
    if (end == std::string::npos) end = dirs.size();
    std::filesystem::path dir = dirs.substr(start, end - start);
    if (dir.empty()) dir = ".";
    if (runnable(dir / name)) return dir / name;
    start = end + 1;
  }
  return std::nullopt;
}

namespace {

struct Pipe {
  int fd[2] = {-1, -1};
  Pipe() {
    if (::pipe2(fd, O_CLOEXEC) != 0) throw Error(std::string("pipe: ") + std::strerror(errno));
  }
  ~Pipe() {
    close_read();
    close_write();
  }
  void close_read() {
    if (fd[0] >= 0) ::close(fd[0]);
    fd[0] = -1;
  }
  void close_write() {
    if (fd[1] >= 0) ::close(fd[1]);
    fd[1] = -1;
  }
};

void ignore_sigpipe() {
  static std::once_flag once;
  std::call_once(once, [] { ::signal(SIGPIPE, SIG_IGN); });
}

// Only async-signal-safe calls between fork and exec.
[[noreturn]] void child(const char* exe, char* const* argv, const char* cwd, int in, int out,
                        int err, int status, const ProcessLimits& limits, rlim_t cpu_s) {
  ::setpgid(0, 0);
  ::signal(SIGPIPE, SIG_DFL);
  if (::dup2(in, 0) < 0 || ::dup2(out, 1) < 0 || ::dup2(err, 2) < 0) ::_exit(127);
  if (::chdir(cwd) != 0) {
    int e = errno;
    (void)!::write(status, &e, sizeof e);
    ::_exit(127);
  }
  struct rlimit rl;
  rl.rlim_cur = rl.rlim_max = 0;
  ::setrlimit(RLIMIT_CORE, &rl);
  rl.rlim_cur = cpu_s;
  rl.rlim_max = cpu_s + 1;
  ::setrlimit(RLIMIT_CPU, &rl);
  if (limits.address_space) {
    rl.rlim_cur = rl.rlim_max = *limits.address_space;
    ::setrlimit(RLIMIT_AS, &rl);
  }
  // Best effort: a fresh network namespace has no interfaces but loopback.
  if (limits.deny_network) (void)::unshare(CLONE_NEWNET);
  ::execve(exe, argv, environ);
  int e = errno;
  (void)!::write(status, &e, sizeof e);
  ::_exit(127);
}

}  // namespace

ProcessResult run_process(const std::vector<std::string>& argv, const std::filesystem::path& cwd,
                          const std::string& input, const ProcessLimits& limits) {
  if (argv.empty()) throw ArgumentError("empty command");
  ignore_sigpipe();
  auto exe = find_executable(argv[0]);
  if (!exe) throw ToolchainMissingError("executable not found: " + argv[0]);
  std::string exe_path = exe->string();
  std::string cwd_path = cwd.string();
  std::vector<char*> cargv;
  for (const auto& a : argv) cargv.push_back(const_cast<char*>(a.c_str()));
  cargv.push_back(nullptr);
  const rlim_t cpu_s = static_cast<rlim_t>(std::ceil(limits.wall_time_s)) + 1;

  Pipe in, out, err, status;
  const auto start = std::chrono::steady_clock::now();
  const auto deadline =
      start + std::chrono::microseconds(static_cast<long long>(limits.wall_time_s * 1e6));
  pid_t pid = ::fork();
  if (pid < 0) throw Error(std::string("fork: ") + std::strerror(errno));
  if (pid == 0)
    child(exe_path.c_str(), cargv.data(), cwd_path.c_str(), in.fd[0], out.fd[1], err.fd[1],
          status.fd[1], limits, cpu_s);
  ::setpgid(pid, pid);  // also done in the child; whichever runs first wins
  in.close_read();
  out.close_write();
  err.close_write();
  status.close_write();

  int exec_errno = 0;
  if (::read(status.fd[0], &exec_errno, sizeof exec_errno) == sizeof exec_errno) {
    ::waitpid(pid, nullptr, 0);
    throw ToolchainMissingError("cannot start " + argv[0] + ": " + std::strerror(exec_errno));
  }

  ProcessResult r;
  for (int fd : {in.fd[1], out.fd[0], err.fd[0]}) ::fcntl(fd, F_SETFL, O_NONBLOCK);
  if (input.empty()) in.close_write();
  std::size_t written = 0;
  bool reaped = false;
  int wstatus = 0;
  auto kill_group = [&] { ::kill(-pid, SIGKILL); };
  char buf[65536];

  while (out.fd[0] >= 0 || err.fd[0] >= 0 || !reaped) {
    if (!reaped) {
      pid_t w = ::waitpid(pid, &wstatus, WNOHANG);
      if (w == pid) {
        reaped = true;
        // Orphaned grandchildren must not keep the pipes open.
        kill_group();
        in.close_write();
      }
    }
    auto now = std::chrono::steady_clock::now();
    if (!reaped && now >= deadline) {
      r.timed_out = true;
      kill_group();
      ::waitpid(pid, &wstatus, 0);
      reaped = true;
      break;
    }
    pollfd fds[3];
    int n = 0;
    if (out.fd[0] >= 0) fds[n++] = {out.fd[0], POLLIN, 0};
    if (err.fd[0] >= 0) fds[n++] = {err.fd[0], POLLIN, 0};
    if (in.fd[1] >= 0) fds[n++] = {in.fd[1], POLLOUT, 0};
    if (n == 0) {
      std::this_thread::sleep_for(std::chrono::milliseconds(1));
      continue;
    }
    auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - now).count();
    int wait_ms = static_cast<int>(std::clamp<long long>(left, 0, 20));
    if (::poll(fds, static_cast<nfds_t>(n), reaped ? 20 : wait_ms) < 0 && errno != EINTR) break;
    for (int i = 0; i < n; ++i) {
      if (!fds[i].revents) continue;
      int fd = fds[i].fd;
      if (fd == in.fd[1]) {
        if (fds[i].revents & (POLLERR | POLLHUP)) {
          in.close_write();
          continue;
        }
        ssize_t k = ::write(fd, input.data() + written, input.size() - written);
        if (k > 0) written += static_cast<std::size_t>(k);
        else if (k < 0 && errno != EAGAIN && errno != EINTR) in.close_write();
        if (written == input.size()) in.close_write();
        continue;
      }
      ssize_t k = ::read(fd, buf, sizeof buf);
      if (k > 0) {
        (fd == out.fd[0] ? r.out : r.err).append(buf, static_cast<std::size_t>(k));
      } else if (k == 0 || (errno != EAGAIN && errno != EINTR)) {
        if (fd == out.fd[0]) out.close_read();
        else err.close_read();
      }
    }
    if (r.out.size() + r.err.size() > limits.max_output) {
      r.overflow = true;
      kill_group();
      if (!reaped) ::waitpid(pid, &wstatus, 0);
      reaped = true;
      break;
    }
  }
  r.wall_ms = static_cast<long>(std::chrono::duration_cast<std::chrono::milliseconds>(
                                    std::chrono::steady_clock::now() - start)
                                    .count());
  if (WIFEXITED(wstatus)) r.exit_code = WEXITSTATUS(wstatus);
  if (WIFSIGNALED(wstatus)) {
    r.term_signal = WTERMSIG(wstatus);
    // The CPU limit is a backstop for the wall clock; both mean "too slow".
    if (r.term_signal == SIGXCPU) r.timed_out = true;
  }
  return r;
}

}  // namespace f2s::sandbox::detail
