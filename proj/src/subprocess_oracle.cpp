#include <csignal>
#include <cerrno>
#include <sys/types.h>
#include <sys/wait.h>
#include <unistd.h>

#include "limitforge/oracle.hpp"

namespace limitforge {

SubprocessOracle::SubprocessOracle(std::vector<std::string> names, std::string command)
    : WordOracle(names.size()), names_(std::move(names)), command_(std::move(command)) {
  std::signal(SIGPIPE, SIG_IGN);
  int in[2];
  int out[2];
  if (pipe(in) != 0 || pipe(out) != 0) throw OracleError("cannot create pipes for " + command_);
  pid_ = fork();
  if (pid_ < 0) throw OracleError("cannot fork for " + command_);
  if (pid_ == 0) {
    dup2(in[0], STDIN_FILENO);
    dup2(out[1], STDOUT_FILENO);
    close(in[0]);
    close(in[1]);
    close(out[0]);
    close(out[1]);
    execl("/bin/sh", "sh", "-c", command_.c_str(), static_cast<char*>(nullptr));
    _exit(127);
  }
  close(in[0]);
  close(out[1]);
  to_child_ = in[1];
  from_child_ = out[0];
}

SubprocessOracle::~SubprocessOracle() {
  if (to_child_ >= 0) close(to_child_);
  if (from_child_ >= 0) close(from_child_);
  if (pid_ > 0) {
    int status = 0;
    waitpid(pid_, &status, 0);
  }
}

Answer SubprocessOracle::decide(const Word& w) {
  std::string line = format_word(w, names_) + "\n";
  add_work(line.size());
  std::size_t sent = 0;
  while (sent < line.size()) {
    ssize_t k = write(to_child_, line.data() + sent, line.size() - sent);
    if (k < 0 && errno == EINTR) continue;
    if (k <= 0) throw ProtocolError("oracle process closed its input");
    sent += static_cast<std::size_t>(k);
  }
  for (;;) {
    auto nl = buffer_.find('\n');
    if (nl != std::string::npos) {
      std::string reply = buffer_.substr(0, nl);
      buffer_.erase(0, nl + 1);
      if (!reply.empty() && reply.back() == '\r') reply.pop_back();
      if (reply == "1") return Answer::Trivial;
      if (reply == "0") return Answer::Nontrivial;
      throw ProtocolError("oracle replied '" + reply + "', expected 1 or 0");
    }
    char chunk[256];
    ssize_t k = read(from_child_, chunk, sizeof chunk);
    if (k < 0 && errno == EINTR) continue;
    if (k <= 0) throw ProtocolError("oracle process ended without replying");
    buffer_.append(chunk, static_cast<std::size_t>(k));
  }
}

}  // namespace limitforge
