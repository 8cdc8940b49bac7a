#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "tropsplit/instance_io.hpp"

namespace {

std::string read_input(const std::string& path) {
  if (path.empty() || path == "-") {
    std::ostringstream os;
    os << std::cin.rdbuf();
    return os.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open input file: " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_output(const std::string& path, const std::string& bytes) {
  if (path.empty() || path == "-") {
    std::cout << bytes;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  out << bytes;
}

struct Options {
  std::string in_file;
  std::string out_file;
  std::string kunneth_file;
  bool pretty = false;
  std::size_t threads = 1;
  long bound = 3;
};

void add_io_flags(CLI::App* cmd, Options& opt) {
  cmd->add_option("--in", opt.in_file, "input JSON file (default stdin)");
  cmd->add_option("--out", opt.out_file, "output JSON file (default stdout)");
  cmd->add_flag("--pretty", opt.pretty, "indented output");
  cmd->add_option("--threads", opt.threads, "worker threads (same output)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "exact lattice, cone, and fan calculus for splitting multiplicities "
      "of punctured invariants with toric gluing strata"};
  app.require_subcommand(1);
  Options opt;

  std::string pending;  // resolved command name
  auto leaf = [&](CLI::App* parent, const std::string& name,
                  const std::string& resolved, const std::string& help) {
    CLI::App* cmd = parent->add_subcommand(name, help);
    add_io_flags(cmd, opt);
    cmd->callback([&pending, resolved]() { pending = resolved; });
    return cmd;
  };

  CLI::App* lattice = app.add_subcommand("lattice", "integer lattice algebra");
  lattice->require_subcommand(1);
  leaf(lattice, "snf", "lattice snf", "Smith normal form of a matrix");
  leaf(lattice, "index", "lattice index",
       "index of the column span in the ambient lattice");
  leaf(lattice, "saturate", "lattice saturate",
       "canonical basis of the saturation");

  CLI::App* fan = app.add_subcommand("fan", "fans and fan morphisms");
  fan->require_subcommand(1);
  leaf(fan, "build", "fan build", "validate and canonicalize a fan");
  leaf(fan, "star", "fan star", "star quotient along a cone");
  leaf(fan, "product", "fan product",
       "fiber product of fans with its component count");

  leaf(&app, "fs-push", "fs-push",
       "displacement-rule pushforward of a torus-invariant stratum");

  CLI::App* type = app.add_subcommand("type", "decorated tropical types");
  type->require_subcommand(1);
  leaf(type, "validate", "type validate", "check a decorated type");
  leaf(type, "split", "type split", "cut a type along edges");
  leaf(type, "cone", "type cone", "evaluation cone and evaluation map");

  leaf(&app, "split-check", "split-check",
       "genericity verdict for the instance displacement");
  leaf(&app, "split-delta", "split-delta",
       "surviving split types with multiplicities");
  CLI::App* formula = leaf(&app, "split-formula", "split-formula",
                           "symbolic splitting formula");
  formula->add_option("--kunneth", opt.kunneth_file,
                      "JSON file with Kunneth coefficients and classes");
  CLI::App* search = leaf(&app, "split-search", "split-search",
                          "scan for a generic displacement vector");
  search->add_option("--bound", opt.bound, "coefficient bound for the scan");

  CLI11_PARSE(app, argc, argv);

  try {
    tropsplit::InstanceDocument doc =
        tropsplit::parse_and_validate(read_input(opt.in_file));
    tropsplit::CommandFlags flags;
    flags.pretty = opt.pretty;
    flags.threads = opt.threads;
    flags.bound = opt.bound;
    if (!opt.kunneth_file.empty())
      flags.kunneth = tropsplit::Json::parse(read_input(opt.kunneth_file));
    tropsplit::CommandResult res =
        tropsplit::run_command(doc, pending, flags);
    write_output(opt.out_file,
                 tropsplit::render_output(res.output, flags.pretty));
    return res.exit_code;
  } catch (const tropsplit::ParseError& e) {
    tropsplit::Json err;
    err["error"]["kind"] = e.kind;
    err["error"]["where"] = e.where;
    err["error"]["message"] = e.what();
    std::cerr << err.dump() << "\n";
    return 1;
  } catch (const std::exception& e) {
    tropsplit::Json err;
    err["error"]["kind"] = "error";
    err["error"]["message"] = e.what();
    std::cerr << err.dump() << "\n";
    return 1;
  }
}
