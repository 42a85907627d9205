// webidx command line: segment, extract, serve, eval.

#include <csignal>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>

#include <unistd.h>

#include "CLI11.hpp"
#include "webidx/evalkit.hpp"
#include "webidx/interface/config.hpp"
#include "webidx/interface/remote.hpp"
#include "webidx/interface/service.hpp"
#include "webidx/pipeline.hpp"

namespace {

constexpr int kExitInput = 2;
constexpr int kExitBackend = 3;

struct Overrides {
    std::string config_path;
    std::optional<std::size_t> max_doc_tokens;
    std::optional<std::size_t> max_block_chars;
    std::optional<std::string> backend;
    std::optional<std::string> format;
    std::optional<std::string> prompt_path;
    std::optional<int> concurrency;
    std::optional<std::string> endpoint;
    std::optional<std::string> model;
    std::optional<std::string> scripted_reply;
    std::optional<std::string> host;
    std::optional<int> port;
    std::optional<int> workers;
    std::optional<std::size_t> max_body_bytes;
};

void add_pipeline_options(CLI::App& cmd, Overrides& o)
{
    cmd.add_option("--config", o.config_path, "YAML config file");
    cmd.add_option("--max-doc-tokens", o.max_doc_tokens, "token budget per extractor prompt");
    cmd.add_option("--max-block-chars", o.max_block_chars, "split blocks longer than this many characters");
    cmd.add_option("--backend", o.backend, "remote | lexical | select_all | select_none | scripted");
    cmd.add_option("--format", o.format, "html | markdown | text");
    cmd.add_option("--prompt", o.prompt_path, "prompt template file");
    cmd.add_option("--concurrency", o.concurrency, "backend calls in flight per page");
    cmd.add_option("--endpoint", o.endpoint, "remote extractor URL");
    cmd.add_option("--model", o.model, "remote model name");
    cmd.add_option("--scripted-reply", o.scripted_reply, "fixed reply for the scripted backend");
}

// defaults < config file < environment < flags
webidx::PipelineConfig build_config(const Overrides& o)
{
    webidx::PipelineConfig cfg;
    if (!o.config_path.empty()) {
        webidx::load_config_file(o.config_path, cfg);
    }
    webidx::apply_env(cfg);
    if (o.max_doc_tokens) {
        cfg.max_doc_tokens = *o.max_doc_tokens;
    }
    if (o.max_block_chars) {
        cfg.segmenter.max_block_chars = *o.max_block_chars;
    }
    if (o.backend) {
        const auto kind = webidx::parse_backend_kind(*o.backend);
        if (!kind) {
            throw webidx::ConfigError("unknown backend " + *o.backend);
        }
        cfg.backend = *kind;
    }
    if (o.format) {
        const auto f = webidx::parse_format(*o.format);
        if (!f) {
            throw webidx::ConfigError("unknown format " + *o.format);
        }
        cfg.format = *f;
    }
    if (o.prompt_path) {
        cfg.prompt_path = *o.prompt_path;
    }
    if (o.concurrency) {
        cfg.concurrency = *o.concurrency;
    }
    if (o.endpoint) {
        cfg.remote.endpoint = *o.endpoint;
    }
    if (o.model) {
        cfg.remote.model = *o.model;
    }
    if (o.scripted_reply) {
        cfg.scripted_reply = *o.scripted_reply;
        if (!o.backend) {
            cfg.backend = webidx::BackendKind::scripted;
        }
    }
    if (o.host) {
        cfg.service.host = *o.host;
    }
    if (o.port) {
        cfg.service.port = *o.port;
    }
    if (o.workers) {
        cfg.service.workers = *o.workers;
    }
    if (o.max_body_bytes) {
        cfg.service.max_body_bytes = *o.max_body_bytes;
    }
    cfg.validate();
    return cfg;
}

class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string read_input(const std::string& path)
{
    if (path.empty() || path == "-") {
        std::string data((std::istreambuf_iterator<char>(std::cin)), std::istreambuf_iterator<char>());
        if (std::cin.bad()) {
            throw InputError("cannot read stdin");
        }
        return data;
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw InputError("cannot read " + path);
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) {
        throw InputError("cannot read " + path);
    }
    return ss.str();
}

// Content goes out byte for byte; a newline is added only for terminals.
void emit(const std::string& content)
{
    std::cout << content;
    if (!content.empty() && content.back() != '\n' && isatty(STDOUT_FILENO) != 0) {
        std::cout << '\n';
    }
    std::cout.flush();
}

webidx::Service* g_service = nullptr;

void on_signal(int)
{
    if (g_service != nullptr) {
        g_service->stop();
    }
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Index-based web content extraction"};
    app.require_subcommand(1);

    Overrides o;
    std::string input;
    std::string query;
    std::string url;
    bool emit_indices = false;
    std::string dataset;
    std::string output;
    std::string csv_path;
    std::size_t eval_workers = 1;
    bool set_match = false;

    auto* seg = app.add_subcommand("segment", "print the indexed block lines of a page");
    seg->add_option("input", input, "HTML file, or - for stdin");
    seg->add_option("--max-block-chars", o.max_block_chars, "split blocks longer than this many characters");
    seg->add_option("--config", o.config_path, "YAML config file");
    seg->add_option("--url", url, "page URL");

    auto* ext = app.add_subcommand("extract", "extract main or query-relevant content from a page");
    ext->add_option("input", input, "HTML file, or - for stdin");
    ext->add_option("-q,--query", query, "query; omit for main-content extraction");
    ext->add_option("--url", url, "page URL shown to the extractor");
    ext->add_flag("--emit-indices", emit_indices, "print the selected intervals on stderr");
    add_pipeline_options(*ext, o);

    auto* srv = app.add_subcommand("serve", "run the HTTP service");
    add_pipeline_options(*srv, o);
    srv->add_option("--host", o.host, "bind address");
    srv->add_option("--port", o.port, "bind port");
    srv->add_option("--workers", o.workers, "request worker threads");
    srv->add_option("--max-body-bytes", o.max_body_bytes, "largest accepted request body");

    auto* ev = app.add_subcommand("eval", "score the pipeline on a JSONL dataset");
    ev->add_option("dataset", dataset, "JSONL file, or - for stdin");
    ev->add_option("-o,--output", output, "per-record JSONL report (default stdout)");
    ev->add_option("--csv", csv_path, "also write a CSV table");
    ev->add_option("--eval-workers", eval_workers, "records scored at once")->check(CLI::PositiveNumber);
    ev->add_flag("--set-match", set_match, "count each distinct token once");
    add_pipeline_options(*ev, o);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInput;
    }

    try {
        const webidx::PipelineConfig cfg = build_config(o);

        if (seg->parsed()) {
            const std::string html = read_input(input);
            const webidx::Pipeline pipeline(cfg, std::make_shared<webidx::SelectNoneBackend>());
            const auto seq = pipeline.segment_page(html, url);
            const std::string lines = webidx::render_indexed(seq);
            std::cout << lines;
            if (!lines.empty()) {
                std::cout << '\n';
            }
            return 0;
        }

        if (ext->parsed()) {
            const std::string html = read_input(input);
            const webidx::Pipeline pipeline(cfg, webidx::make_backend(cfg));
            const auto r = pipeline.run(html, query, std::nullopt, url);
            emit(r.content);
            if (emit_indices) {
                std::cerr << r.indices.to_string() << '\n';
            }
            return 0;
        }

        if (srv->parsed()) {
            auto pipeline = std::make_shared<const webidx::Pipeline>(cfg, webidx::make_backend(cfg));
            webidx::Service service(pipeline, cfg.service);
            g_service = &service;
            std::signal(SIGINT, on_signal);
            std::signal(SIGTERM, on_signal);
            std::cerr << "listening on " << cfg.service.host << ':' << cfg.service.port << '\n';
            if (!service.listen()) {
                std::cerr << "cannot bind " << cfg.service.host << ':' << cfg.service.port << '\n';
                return kExitInput;
            }
            return 0;
        }

        if (ev->parsed()) {
            std::istringstream data(read_input(dataset));
            const auto records = webidx::eval::read_jsonl(data);
            const webidx::Pipeline pipeline(cfg, webidx::make_backend(cfg));
            webidx::eval::EvalOptions opts;
            opts.workers = eval_workers;
            opts.match = set_match ? webidx::eval::TokenMatch::set : webidx::eval::TokenMatch::multiset;
            const auto report = webidx::eval::run_eval(records, pipeline, opts);
            if (output.empty() || output == "-") {
                webidx::eval::write_report_jsonl(std::cout, report);
            } else {
                std::ofstream out(output);
                if (!out) {
                    throw InputError("cannot write " + output);
                }
                webidx::eval::write_report_jsonl(out, report);
            }
            if (!csv_path.empty()) {
                std::ofstream csv(csv_path);
                if (!csv) {
                    throw InputError("cannot write " + csv_path);
                }
                webidx::eval::write_report_csv(csv, report);
            }
            std::cerr << webidx::eval::summary_to_json(report.summary).dump() << '\n';
            return 0;
        }
    } catch (const webidx::BackendUnavailable& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitBackend;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInput;
    }
    return 0;
}
