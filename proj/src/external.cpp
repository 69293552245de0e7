#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cstring>

#include "kindmc/solver.h"

namespace kindmc {

namespace {

using Clock = std::chrono::steady_clock;

struct SolverFailure
{
  std::string what;
};

struct TimedOut
{
};

/** Child process running `/bin/sh -c command` with piped stdio. */
class Process
{
 public:
  Process(const std::string &command, unsigned timeout_ms)
  {
    static const bool sigpipe_ignored = [] {
      signal(SIGPIPE, SIG_IGN);
      return true;
    }();
    (void)sigpipe_ignored;
    if (timeout_ms) {
      deadline_ = Clock::now() + std::chrono::milliseconds(timeout_ms);
    }
    int in[2], out[2], err[2];
    if (pipe(in) || pipe(out) || pipe(err)) {
      throw SolverFailure{std::string("pipe: ") + std::strerror(errno)};
    }
    pid_ = fork();
    if (pid_ < 0) {
      throw SolverFailure{std::string("fork: ") + std::strerror(errno)};
    }
    if (pid_ == 0) {
      dup2(in[0], STDIN_FILENO);
      dup2(out[1], STDOUT_FILENO);
      dup2(err[1], STDERR_FILENO);
      for (int fd : {in[0], in[1], out[0], out[1], err[0], err[1]}) {
        close(fd);
      }
      execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char *>(nullptr));
      _exit(127);
    }
    close(in[0]);
    close(out[1]);
    close(err[1]);
    in_ = in[1];
    out_ = out[0];
    err_ = err[0];
    for (int fd : {in_, out_, err_}) {
      fcntl(fd, F_SETFL, fcntl(fd, F_GETFL) | O_NONBLOCK);
      fcntl(fd, F_SETFD, FD_CLOEXEC);
    }
  }

  ~Process()
  {
    for (int fd : {in_, out_, err_}) {
      if (fd >= 0) {
        close(fd);
      }
    }
    if (pid_ > 0 && !reaped_) {
      kill(pid_, SIGKILL);
      waitpid(pid_, nullptr, 0);
    }
  }

  void send(const std::string &text) { pending_ += text; }

  void close_input()
  {
    close_input_ = true;
  }

  /** Pumps I/O until `done(stdout so far)` holds or stdout reaches EOF.
   *  Returns false on EOF. */
  template <typename Pred>
  bool pump(Pred done)
  {
    while (!done(out_buf_)) {
      if (out_ < 0) {
        return false;
      }
      flush_input_if_closing();
      pollfd fds[3];
      nfds_t n = 0;
      fds[n++] = {out_, POLLIN, 0};
      if (err_ >= 0) {
        fds[n++] = {err_, POLLIN, 0};
      }
      if (in_ >= 0 && !pending_.empty()) {
        fds[n++] = {in_, POLLOUT, 0};
      }
      int wait_ms = -1;
      if (deadline_) {
        auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
                        *deadline_ - Clock::now())
                        .count();
        if (left <= 0) {
          throw TimedOut{};
        }
        wait_ms = static_cast<int>(left);
      }
      int rc = poll(fds, n, wait_ms);
      if (rc < 0) {
        if (errno == EINTR) {
          continue;
        }
        throw SolverFailure{std::string("poll: ") + std::strerror(errno)};
      }
      if (rc == 0) {
        throw TimedOut{};
      }
      for (nfds_t i = 0; i < n; ++i) {
        if (!fds[i].revents) {
          continue;
        }
        if (fds[i].fd == in_) {
          write_some();
        } else if (fds[i].fd == out_) {
          read_some(out_, out_buf_);
        } else if (fds[i].fd == err_) {
          read_some(err_, err_buf_);
        }
      }
    }
    return true;
  }

  /// drains stdout and stderr to EOF, then reaps; returns the exit status
  int finish()
  {
    close_input();
    pump([](const std::string &) { return false; });
    while (err_ >= 0) {
      pollfd p{err_, POLLIN, 0};
      if (poll(&p, 1, 100) <= 0) {
        break;
      }
      read_some(err_, err_buf_);
    }
    int status = 0;
    waitpid(pid_, &status, 0);
    reaped_ = true;
    return status;
  }

  std::string &out() { return out_buf_; }
  const std::string &err() const { return err_buf_; }

 private:
  void flush_input_if_closing()
  {
    if (close_input_ && pending_.empty() && in_ >= 0) {
      close(in_);
      in_ = -1;
    }
  }

  void write_some()
  {
    ssize_t w = write(in_, pending_.data(), pending_.size());
    if (w > 0) {
      pending_.erase(0, static_cast<size_t>(w));
    } else if (w < 0 && errno != EAGAIN && errno != EINTR) {
      // the solver closed its input; whatever it printed tells why
      pending_.clear();
      close(in_);
      in_ = -1;
    }
  }

  void read_some(int &fd, std::string &buf)
  {
    char chunk[4096];
    ssize_t r = read(fd, chunk, sizeof chunk);
    if (r > 0) {
      buf.append(chunk, static_cast<size_t>(r));
    } else if (r == 0 || (errno != EAGAIN && errno != EINTR)) {
      close(fd);
      fd = -1;
    }
  }

  pid_t pid_ = -1;
  bool reaped_ = false;
  int in_ = -1, out_ = -1, err_ = -1;
  std::string pending_;
  bool close_input_ = false;
  std::string out_buf_, err_buf_;
  std::optional<Clock::time_point> deadline_;
};

/// first whitespace-delimited line of `buf` that is not blank, if complete
std::optional<std::string> first_line(const std::string &buf, size_t &end)
{
  size_t pos = 0;
  while (true) {
    size_t nl = buf.find('\n', pos);
    if (nl == std::string::npos) {
      return std::nullopt;
    }
    std::string line = buf.substr(pos, nl - pos);
    auto b = line.find_first_not_of(" \t\r");
    pos = nl + 1;
    if (b != std::string::npos) {
      auto e = line.find_last_not_of(" \t\r");
      end = pos;
      return line.substr(b, e - b + 1);
    }
  }
}

bool balanced(const std::string &s)
{
  int depth = 0;
  bool opened = false;
  for (char c : s) {
    if (c == '(') {
      ++depth;
      opened = true;
    } else if (c == ')') {
      --depth;
    }
  }
  return opened && depth == 0;
}

}  // namespace

ExternalSolver::ExternalSolver(SolverConfig cfg) : cfg_(std::move(cfg))
{
  cfg_.validate();
}

SolverVerdict ExternalSolver::check(const Query &q)
{
  auto unknown = [&](std::string why, bool failed) {
    return SolverVerdict{SolverStatus::Unknown, {}, "external solver: " + why, failed};
  };
  try {
    Process p(cfg_.command, cfg_.timeout_ms);
    p.send(serialize_smtlib_check(q));
    size_t consumed = 0;
    std::optional<std::string> status;
    p.pump([&](const std::string &buf) { return (status = first_line(buf, consumed)).has_value(); });
    if (!status) {
      int rc = p.finish();
      std::string why = "exited without an answer";
      if (WIFEXITED(rc)) {
        why += " (status " + std::to_string(WEXITSTATUS(rc)) + ")";
      }
      if (!p.err().empty()) {
        why += ": " + p.err();
      }
      return unknown(why, true);
    }
    if (*status == "unsat" || *status == "unknown") {
      p.send("(exit)\n");
      p.finish();
      if (*status == "unsat") {
        return {SolverStatus::Unsat, {}, "", false};
      }
      return unknown("answered unknown", false);
    }
    if (*status != "sat") {
      p.send("(exit)\n");
      p.finish();
      return unknown("unexpected response '" + *status + "'", true);
    }
    auto names = model_names(q);
    if (names.empty()) {
      p.send("(exit)\n");
      p.finish();
      return {SolverStatus::Sat, {}, "", false};
    }
    std::string request = "(get-value (";
    for (size_t i = 0; i < names.size(); ++i) {
      request += (i ? " " : "") + names[i];
    }
    request += "))\n";
    p.send(request);
    p.pump([&](const std::string &buf) { return balanced(buf.substr(consumed)); });
    std::string response = p.out().substr(consumed);
    p.send("(exit)\n");
    p.finish();
    try {
      return {SolverStatus::Sat, parse_get_value(response, q), "", false};
    } catch (const ProtocolError &e) {
      return unknown(e.what(), true);
    }
  } catch (const TimedOut &) {
    return unknown("timeout after " + std::to_string(cfg_.timeout_ms) + " ms", false);
  } catch (const SolverFailure &f) {
    return unknown(f.what, true);
  }
}

}  // namespace kindmc
