#include <cstdlib>
#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "neurop/cli.hpp"

#ifndef NEUROP_DEFAULT_KB
#define NEUROP_DEFAULT_KB "kb/default"
#endif

int main(int argc, char** argv) {
  using namespace neurop::cli;

  CLI::App app{"neurop: rule- and automaton-based EMG neuropathy diagnosis"};
  app.footer(std::string("\nThe knowledge base directory defaults to $NEUROP_KB, then ") + NEUROP_DEFAULT_KB + ".\n\n" +
             exit_code_help);
  app.require_subcommand(1);

  std::string kb_dir;
  if (const char* env = std::getenv("NEUROP_KB"); env && *env)
    kb_dir = env;
  else
    kb_dir = NEUROP_DEFAULT_KB;

  Format format = Format::text;
  const std::map<std::string, Format> formats{{"text", Format::text}, {"json", Format::json}};

  std::string exam_path;
  std::string selector;

  auto* diagnose = app.add_subcommand("diagnose", "Diagnose an exam and print the traced report");
  diagnose->add_option("exam", exam_path, "Exam JSON file")->required();
  diagnose->add_option("--kb", kb_dir, "Knowledge base directory");
  diagnose->add_option("--format", format, "Output format")->transform(CLI::CheckedTransformer(formats, CLI::ignore_case));

  auto* validate = app.add_subcommand("validate-kb", "Check every knowledge base file and list violations");
  validate->add_option("--kb", kb_dir, "Knowledge base directory");

  auto* enumerate = app.add_subcommand("enumerate", "Tabulate all 62 segment chains against the reference rules");
  enumerate->add_option("--kb", kb_dir, "Knowledge base directory");
  enumerate->add_option("--format", format, "Output format")->transform(CLI::CheckedTransformer(formats, CLI::ignore_case));

  auto* trace = app.add_subcommand("trace", "Show rule firings and automaton steps for one nerve");
  trace->add_option("exam", exam_path, "Exam JSON file")->required();
  trace->add_option("--kb", kb_dir, "Knowledge base directory");
  trace->add_option("--nerve", selector, "Nerve selector name:side:fibre")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? exit_ok : exit_usage;
  }

  if (*diagnose) return cmd_diagnose(exam_path, kb_dir, format, std::cout, std::cerr);
  if (*validate) return cmd_validate_kb(kb_dir, std::cout, std::cerr);
  if (*enumerate) return cmd_enumerate(kb_dir, format, std::cout, std::cerr);
  if (*trace) return cmd_trace(exam_path, kb_dir, selector, std::cout, std::cerr);
  return exit_usage;
}
