#include <gtest/gtest.h>

#include <atomic>
#include <map>
#include <memory>
#include <string>
#include <thread>
#include <vector>

#include "../support/golden.hpp"
#include "../support/testkit.hpp"
#include "webidx/evalkit.hpp"
#include "webidx/interface/config.hpp"
#include "webidx/interface/remote.hpp"
#include "webidx/interface/service.hpp"

using namespace webidx;
using namespace std::chrono_literals;

namespace {

EnvLookup fake_env(std::map<std::string, std::string> vars)
{
    auto shared = std::make_shared<std::map<std::string, std::string>>(std::move(vars));
    return [shared](const char* k) -> const char* {
        const auto it = shared->find(k);
        return it == shared->end() ? nullptr : it->second.c_str();
    };
}

/// Serves a Service on an ephemeral port for the lifetime of the object.
class RunningService {
public:
    explicit RunningService(std::shared_ptr<const ExtractorBackend> backend, ServiceConfig sc = {},
                            PipelineConfig pc = {})
    {
        pc.backend = BackendKind::scripted;
        pipeline_ = std::make_shared<const Pipeline>(pc, std::move(backend));
        service_ = std::make_unique<Service>(pipeline_, sc);
        port_ = service_->bind_any_port();
        thread_ = std::thread([this] { service_->listen_after_bind(); });
        service_->wait_until_ready();
    }
    ~RunningService()
    {
        service_->stop();
        thread_.join();
    }

    httplib::Client client() const
    {
        httplib::Client c("127.0.0.1", port_);
        c.set_read_timeout(30, 0);
        return c;
    }
    int port() const { return port_; }

private:
    std::shared_ptr<const Pipeline> pipeline_;
    std::unique_ptr<Service> service_;
    int port_ = -1;
    std::thread thread_;
};

/// Minimal chat-completions endpoint that answers from a queue of statuses.
class FakeEndpoint {
public:
    explicit FakeEndpoint(std::vector<int> statuses, std::string content = "[[1,1]]")
        : statuses_(std::move(statuses)), content_(std::move(content))
    {
        server_.Post("/v1/chat/completions", [this](const httplib::Request& req, httplib::Response& res) {
            const std::size_t k = calls_++;
            last_body_ = req.body;
            last_auth_ = req.get_header_value("Authorization");
            const int status = k < statuses_.size() ? statuses_[k] : 200;
            res.status = status;
            if (status == 200) {
                res.set_content(nlohmann::json{{"choices", {{{"message", {{"content", content_}}}}}}}.dump(),
                                "application/json");
            }
        });
        port_ = server_.bind_to_any_port("127.0.0.1");
        thread_ = std::thread([this] { server_.listen_after_bind(); });
        server_.wait_until_ready();
    }
    ~FakeEndpoint()
    {
        server_.stop();
        thread_.join();
    }

    std::string url() const { return "http://127.0.0.1:" + std::to_string(port_); }
    std::size_t calls() const { return calls_; }
    std::string last_body() const { return last_body_; }
    std::string last_auth() const { return last_auth_; }

private:
    std::vector<int> statuses_;
    std::string content_;
    httplib::Server server_;
    int port_ = -1;
    std::thread thread_;
    std::atomic<std::size_t> calls_{0};
    std::string last_body_;
    std::string last_auth_;
};

std::string page(const char* name) { return testkit::read_file(testkit::fixtures() / "pages" / name); }

PredictRequest request_for(const BlockSequence& seq)
{
    return PredictRequest{"system", "prompt", {1, seq.size()}, nullptr, seq.blocks};
}

}  // namespace

// --- configuration --------------------------------------------------------

TEST(Config, Defaults)
{
    PipelineConfig cfg;
    EXPECT_EQ(cfg.max_doc_tokens, 8192u);
    EXPECT_EQ(cfg.chunk_budget(), 8192u - 1024u);
    EXPECT_EQ(cfg.segmenter.max_block_chars, 2000u);
    EXPECT_EQ(cfg.backend, BackendKind::lexical);
    EXPECT_EQ(cfg.format, OutputFormat::markdown);
    EXPECT_NO_THROW(cfg.validate());
}

TEST(Config, YamlOverlay)
{
    PipelineConfig cfg;
    apply_config_yaml(R"(
max_doc_tokens: 4096
prompt_margin: 512
max_block_chars: 500
backend: select_all
format: text
concurrency: 2
remote:
  endpoint: http://localhost:9000
  model: small
  retries: 5
service:
  port: 9090
  workers: 3
)",
                      cfg);
    EXPECT_EQ(cfg.max_doc_tokens, 4096u);
    EXPECT_EQ(cfg.chunk_budget(), 3584u);
    EXPECT_EQ(cfg.segmenter.max_block_chars, 500u);
    EXPECT_EQ(cfg.backend, BackendKind::select_all);
    EXPECT_EQ(cfg.format, OutputFormat::text);
    EXPECT_EQ(cfg.concurrency, 2);
    EXPECT_EQ(cfg.remote.endpoint, "http://localhost:9000");
    EXPECT_EQ(cfg.remote.model, "small");
    EXPECT_EQ(cfg.remote.retries, 5);
    EXPECT_EQ(cfg.service.port, 9090);
    EXPECT_EQ(cfg.service.workers, 3);
}

TEST(Config, YamlErrors)
{
    for (const char* bad : {"max_doc_tokens: -1", "max_doc_tokens: lots", "mystery: 1", "backend: gpt",
                            "format: pdf", "remote: 3", "remote:\n  colour: red", "[1, 2]", "a: [b"}) {
        PipelineConfig cfg;
        EXPECT_THROW(apply_config_yaml(bad, cfg), ConfigError) << bad;
    }
    PipelineConfig cfg;
    EXPECT_NO_THROW(apply_config_yaml("", cfg));
    EXPECT_THROW(load_config_file("/nonexistent/webidx.yaml", cfg), ConfigError);
}

TEST(Config, Validation)
{
    PipelineConfig cfg;
    cfg.prompt_margin = cfg.max_doc_tokens;
    EXPECT_THROW(cfg.validate(), ConfigError);
    PipelineConfig remote;
    remote.backend = BackendKind::remote;
    EXPECT_THROW(remote.validate(), ConfigError);
    remote.remote.endpoint = "http://x";
    EXPECT_NO_THROW(remote.validate());
}

TEST(Config, EnvOverridesFile)
{
    PipelineConfig cfg;
    apply_config_yaml("remote:\n  endpoint: http://file\n  model: file-model\n", cfg);
    apply_env(cfg, fake_env({{"EXTRACTOR_ENDPOINT", "http://env"}, {"EXTRACTOR_API_KEY", "k"}, {"EXTRACTOR_MODEL", ""}}));
    EXPECT_EQ(cfg.remote.endpoint, "http://env");
    EXPECT_EQ(cfg.remote.api_key, "k");
    EXPECT_EQ(cfg.remote.model, "file-model");
}

TEST(Config, ShippedSampleMatchesDefaults)
{
    const std::string dir = std::string(WEBIDX_FIXTURES) + "/../../config/";
    PipelineConfig cfg;
    load_config_file(dir + "webidx.yaml", cfg);
    const PipelineConfig defaults;
    EXPECT_EQ(cfg.max_doc_tokens, defaults.max_doc_tokens);
    EXPECT_EQ(cfg.prompt_margin, defaults.prompt_margin);
    EXPECT_EQ(cfg.segmenter.max_block_chars, defaults.segmenter.max_block_chars);
    EXPECT_EQ(cfg.concurrency, defaults.concurrency);
    EXPECT_EQ(cfg.service.max_body_bytes, defaults.service.max_body_bytes);
    EXPECT_EQ(cfg.service.workers, defaults.service.workers);
    EXPECT_EQ(cfg.remote.retries, defaults.remote.retries);
    EXPECT_NO_THROW(cfg.validate());

    const auto file = PromptTemplate::load(dir + "prompt_query.txt");
    const auto builtin = PromptTemplate::for_mode(QueryMode::query_relevant);
    const auto probe = [](const PromptTemplate& t) {
        return t.render(Query{"q", QueryMode::query_relevant}, "T", "u", "[1] <p>x</p>");
    };
    EXPECT_EQ(probe(file), probe(builtin) + "\n");
}

// --- remote backend -------------------------------------------------------

TEST(Remote, EndpointParsing)
{
    const auto a = EndpointUrl::parse("http://127.0.0.1:8000");
    EXPECT_EQ(a.origin, "http://127.0.0.1:8000");
    EXPECT_EQ(a.path, "/v1/chat/completions");
    const auto b = EndpointUrl::parse("https://api.example.com/v2/chat");
    EXPECT_EQ(b.origin, "https://api.example.com");
    EXPECT_EQ(b.path, "/v2/chat");
    EXPECT_THROW(EndpointUrl::parse("api.example.com"), ConfigError);
    EXPECT_THROW(EndpointUrl::parse("ftp://x"), ConfigError);
}

TEST(Remote, ReplyContent)
{
    EXPECT_EQ(RemoteBackend::reply_content(R"({"choices":[{"message":{"content":"NA"}}]})"), "NA");
    EXPECT_EQ(RemoteBackend::reply_content(R"({"choices":[{"text":"[[1,2]]"}]})"), "[[1,2]]");
    EXPECT_THROW(RemoteBackend::reply_content("{}"), BackendUnavailable);
    EXPECT_THROW(RemoteBackend::reply_content("<html>"), BackendUnavailable);
}

TEST(Remote, SendsChatRequest)
{
    FakeEndpoint ep({200}, "[[1,1]]");
    RemoteConfig rc{ep.url(), "secret", "tiny", 5, 3};
    RemoteBackend b(rc, 1ms);
    BlockSequence seq;
    seq.blocks.push_back({1, "p", "x", std::nullopt});
    EXPECT_EQ(b.predict(request_for(seq)), "[[1,1]]");
    const auto body = nlohmann::json::parse(ep.last_body());
    EXPECT_EQ(body["model"], "tiny");
    EXPECT_EQ(body["temperature"], 0);
    EXPECT_EQ(body["messages"][0]["role"], "system");
    EXPECT_EQ(body["messages"][1]["content"], "prompt");
    EXPECT_EQ(ep.last_auth(), "Bearer secret");
}

TEST(Remote, RetriesServerErrorsThenSucceeds)
{
    FakeEndpoint ep({503, 429, 200});
    RemoteBackend b(RemoteConfig{ep.url(), "", "", 5, 3}, 1ms);
    BlockSequence seq;
    seq.blocks.push_back({1, "p", "x", std::nullopt});
    EXPECT_EQ(b.predict(request_for(seq)), "[[1,1]]");
    EXPECT_EQ(ep.calls(), 3u);
}

TEST(Remote, GivesUpAfterRetries)
{
    FakeEndpoint ep({500, 500, 500, 500});
    RemoteBackend b(RemoteConfig{ep.url(), "", "", 5, 2}, 1ms);
    BlockSequence seq;
    seq.blocks.push_back({1, "p", "x", std::nullopt});
    EXPECT_THROW(b.predict(request_for(seq)), BackendUnavailable);
    EXPECT_EQ(ep.calls(), 2u);
}

TEST(Remote, ClientErrorIsNotRetried)
{
    FakeEndpoint ep({401});
    RemoteBackend b(RemoteConfig{ep.url(), "", "", 5, 3}, 1ms);
    BlockSequence seq;
    seq.blocks.push_back({1, "p", "x", std::nullopt});
    EXPECT_THROW(b.predict(request_for(seq)), BackendUnavailable);
    EXPECT_EQ(ep.calls(), 1u);
}

TEST(Remote, UnreachableEndpoint)
{
    RemoteBackend b(RemoteConfig{"http://127.0.0.1:1", "", "", 2, 2}, 1ms);
    BlockSequence seq;
    seq.blocks.push_back({1, "p", "x", std::nullopt});
    EXPECT_THROW(b.predict(request_for(seq)), BackendUnavailable);
}

TEST(Remote, FullPipelineThroughEndpoint)
{
    FakeEndpoint ep({}, "Here you go: [[1,1]]");
    PipelineConfig cfg;
    cfg.backend = BackendKind::remote;
    cfg.remote.endpoint = ep.url();
    const Pipeline p(cfg, make_backend(cfg));
    const auto r = p.run("<body><h1>Title</h1><p>Body</p></body>", "title?", OutputFormat::text);
    EXPECT_EQ(r.content, "Title");
    EXPECT_EQ(r.indices.to_string(), "[[1,1]]");
}

// --- service --------------------------------------------------------------

TEST(Service, Healthz)
{
    RunningService s(std::make_shared<SelectAllBackend>());
    auto c = s.client();
    const auto res = c.Get("/healthz");
    ASSERT_TRUE(res);
    EXPECT_EQ(res->status, 200);
    EXPECT_EQ(res->body, "ok");
}

TEST(Service, ExtractOneBlockPage)
{
    RunningService s(std::make_shared<SelectAllBackend>());
    auto c = s.client();
    const auto res = c.Post("/extract", nlohmann::json{{"html", "<body><p>Only block</p></body>"}}.dump(),
                            "application/json");
    ASSERT_TRUE(res);
    EXPECT_EQ(res->status, 200);
    const auto j = nlohmann::json::parse(res->body);
    EXPECT_EQ(j["content"], "Only block");
    EXPECT_EQ(j["indices"], nlohmann::json::parse("[[1,1]]"));
    EXPECT_EQ(j["stats"]["blocks"], 1);
    EXPECT_EQ(j["stats"]["chunks"], 1);
    EXPECT_GE(j["stats"]["latency_ms"].get<double>(), 0.0);
}

TEST(Service, ExtractFormats)
{
    RunningService s(std::make_shared<SelectAllBackend>());
    auto c = s.client();
    const std::string html = "<body><h1>T</h1><p>a <b>b</b></p></body>";
    auto get = [&](const char* fmt) {
        const auto res = c.Post("/extract", nlohmann::json{{"html", html}, {"format", fmt}}.dump(), "application/json");
        return nlohmann::json::parse(res->body)["content"].get<std::string>();
    };
    EXPECT_EQ(get("markdown"), "# T\n\na **b**");
    EXPECT_EQ(get("text"), "T\n\na b");
    EXPECT_NE(get("html").find("<h1>T</h1>"), std::string::npos);
}

TEST(Service, Segment)
{
    RunningService s(std::make_shared<SelectAllBackend>());
    auto c = s.client();
    const auto res = c.Post("/segment", R"({"html":"<body><div>intro<p>A</p></div></body>"})", "application/json");
    ASSERT_TRUE(res);
    EXPECT_EQ(res->status, 200);
    EXPECT_EQ(res->body, "[1] <div>intro</div>\n[2] <p>A</p>");
}

TEST(Service, BadRequests)
{
    RunningService s(std::make_shared<SelectAllBackend>());
    auto c = s.client();
    for (const char* body : {"not json", "[1]", "{}", R"({"html":3})", R"({"html":"x","query":7})",
                             R"({"html":"x","format":"pdf"})"}) {
        const auto res = c.Post("/extract", body, "application/json");
        ASSERT_TRUE(res);
        EXPECT_EQ(res->status, 400) << body;
        EXPECT_TRUE(nlohmann::json::parse(res->body).contains("error"));
    }
    const auto seg = c.Post("/segment", "nope", "application/json");
    EXPECT_EQ(seg->status, 400);
}

TEST(Service, OversizedBodyRejected)
{
    RunningService s(std::make_shared<SelectAllBackend>());
    auto c = s.client();
    const std::string body = R"({"html":")" + std::string(20u << 20, 'a') + R"("})";
    const auto res = c.Post("/extract", body, "application/json");
    ASSERT_TRUE(res);
    EXPECT_EQ(res->status, 413);
}

TEST(Service, BackendFailureIs502)
{
    RunningService s(std::make_shared<ScriptedBackend>(
        [](const PredictRequest&) -> std::string { throw BackendUnavailable("model offline"); }));
    auto c = s.client();
    const auto res = c.Post("/extract", R"({"html":"<p>x</p>"})", "application/json");
    ASSERT_TRUE(res);
    EXPECT_EQ(res->status, 502);
    EXPECT_NE(res->body.find("model offline"), std::string::npos);
}

TEST(Service, OversizedBlockIs422)
{
    PipelineConfig pc;
    pc.max_doc_tokens = 200;
    pc.prompt_margin = 100;
    pc.segmenter.max_block_chars = 2000;
    RunningService s(std::make_shared<SelectAllBackend>(), {}, pc);
    auto c = s.client();
    const auto res = c.Post("/extract", nlohmann::json{{"html", "<p>" + std::string(1500, 'x') + "</p>"}}.dump(),
                            "application/json");
    ASSERT_TRUE(res);
    EXPECT_EQ(res->status, 422);
}

TEST(Service, ConcurrentRequestsAreIsolated)
{
    RunningService s(std::make_shared<SelectAllBackend>(), ServiceConfig{.workers = 4});
    std::vector<std::thread> clients;
    std::atomic<int> ok{0};
    for (int t = 0; t < 8; ++t) {
        clients.emplace_back([&, t] {
            auto c = s.client();
            for (int k = 0; k < 5; ++k) {
                const std::string word = "w" + std::to_string(t) + "x" + std::to_string(k);
                const auto res = c.Post("/extract",
                                        nlohmann::json{{"html", "<p>" + word + "</p>"}, {"format", "text"}}.dump(),
                                        "application/json");
                if (res && res->status == 200 && nlohmann::json::parse(res->body)["content"] == word) {
                    ++ok;
                }
            }
        });
    }
    for (auto& t : clients) {
        t.join();
    }
    EXPECT_EQ(ok.load(), 40);
}

TEST(Service, IndicesAreCanonical)
{
    RunningService s(std::make_shared<ScriptedBackend>(ScriptedBackend::fixed("[[3,3],[1,2],[5,5]]")));
    auto c = s.client();
    const auto res = c.Post("/extract", nlohmann::json{{"html", page("13_faq_page.html")}}.dump(), "application/json");
    ASSERT_TRUE(res);
    const auto j = nlohmann::json::parse(res->body);
    std::vector<Interval> raw;
    for (const auto& p : j["indices"]) {
        raw.push_back({p[0].get<std::size_t>(), p[1].get<std::size_t>()});
    }
    EXPECT_EQ(IntervalSet::canonicalize(raw).intervals(), raw);
    EXPECT_EQ(j["indices"].dump(), "[[1,3],[5,5]]");
}

// --- command line ---------------------------------------------------------

TEST(Cli, SegmentSingleBlock)
{
    const auto r = testkit::run_cli({"segment", "-"}, "<body><p>Hi</p></body>");
    EXPECT_EQ(r.status, 0);
    EXPECT_EQ(r.out, "[1] <p>Hi</p>\n");
}

TEST(Cli, SegmentEmptyInput)
{
    const auto r = testkit::run_cli({"segment"}, "");
    EXPECT_EQ(r.status, 0);
    EXPECT_EQ(r.out, "");
}

TEST(Cli, SegmentBinaryGarbage)
{
    std::string junk;
    for (int k = 0; k < 256; ++k) {
        junk += static_cast<char>((k * 37 + 11) & 0xff);
    }
    const auto r = testkit::run_cli({"segment"}, junk);
    EXPECT_EQ(r.status, 0);
    EXPECT_NE(r.out.find("\xEF\xBF\xBD"), std::string::npos);
    EXPECT_EQ(testkit::golden_mismatch("cli_segment_garbage.txt", r.out), "");
}

TEST(Cli, SegmentFileArgumentAndSplitLimit)
{
    const auto path = testkit::fixtures() / "pages" / "09_longform_essay.html";
    const auto r = testkit::run_cli({"segment", path.string(), "--max-block-chars", "300"});
    EXPECT_EQ(r.status, 0);
    EXPECT_NE(r.out.find("split-id=\"1\""), std::string::npos);
}

TEST(Cli, ExtractSelectAllText)
{
    const std::string html = page("06_wiki_article.html");
    const auto r = testkit::run_cli({"extract", "-q", "history", "--backend", "select_all", "--format", "text"}, html);
    EXPECT_EQ(r.status, 0) << r.err;
    PipelineConfig cfg;
    const Pipeline p(cfg, std::make_shared<SelectAllBackend>());
    EXPECT_EQ(r.out, p.run(html, "history", OutputFormat::text).content);
    EXPECT_FALSE(r.out.empty());
}

TEST(Cli, ExtractSelectNoneIsEmptySuccess)
{
    const auto r = testkit::run_cli({"extract", "-q", "x", "--backend", "select_none"}, page("01_news_article.html"));
    EXPECT_EQ(r.status, 0);
    EXPECT_EQ(r.out, "");
}

TEST(Cli, ExtractEmitIndices)
{
    const auto r = testkit::run_cli({"extract", "--scripted-reply", "[[1,1]]", "--emit-indices", "--format", "text"},
                                    "<body><p>First</p><p>Second</p></body>");
    EXPECT_EQ(r.status, 0);
    EXPECT_EQ(r.err, "[[1,1]]\n");
    EXPECT_EQ(r.out, "First");
}

TEST(Cli, InputAndConfigErrorsExitTwo)
{
    EXPECT_EQ(testkit::run_cli({"extract", "/nonexistent/page.html"}).status, 2);
    EXPECT_EQ(testkit::run_cli({"extract", "--backend", "gpt"}, "<p>x</p>").status, 2);
    EXPECT_EQ(testkit::run_cli({"extract", "--format", "pdf"}, "<p>x</p>").status, 2);
    EXPECT_EQ(testkit::run_cli({"extract", "--backend", "remote"}, "<p>x</p>").status, 2);
    EXPECT_EQ(testkit::run_cli({"extract", "--config", "/nonexistent.yaml"}, "<p>x</p>").status, 2);
    EXPECT_EQ(testkit::run_cli({"segment", "--max-block-chars", "5"}, "<p>x</p>").status, 2);
    EXPECT_EQ(testkit::run_cli({"frobnicate"}).status, 2);
    EXPECT_EQ(testkit::run_cli({}).status, 2);
}

TEST(Cli, UnreachableBackendExitsThree)
{
    const auto cfg = std::filesystem::temp_directory_path() / "webidx-cli-retries.yaml";
    testkit::write_file(cfg, "remote:\n  retries: 1\n  timeout_seconds: 2\n");
    const auto r = testkit::run_cli({"extract", "--config", cfg.string(), "--backend", "remote"}, "<p>x</p>",
                                    {{"EXTRACTOR_ENDPOINT", "http://127.0.0.1:1"}});
    EXPECT_EQ(r.status, 3) << r.err;
    std::filesystem::remove(cfg);
}

TEST(Cli, PrecedenceFlagsOverEnvOverFile)
{
    FakeEndpoint good({}, "[[2,2]]");
    const auto cfg = std::filesystem::temp_directory_path() / "webidx-cli-precedence.yaml";
    testkit::write_file(cfg, "backend: remote\nformat: text\nremote:\n  endpoint: http://127.0.0.1:1\n  retries: 1\n");
    const std::string html = "<body><p>One</p><p>Two</p></body>";
    // env beats the file
    auto r = testkit::run_cli({"extract", "--config", cfg.string()}, html, {{"EXTRACTOR_ENDPOINT", good.url()}});
    EXPECT_EQ(r.status, 0) << r.err;
    EXPECT_EQ(r.out, "Two");
    // the flag beats env
    r = testkit::run_cli({"extract", "--config", cfg.string(), "--endpoint", good.url()}, html,
                         {{"EXTRACTOR_ENDPOINT", "http://127.0.0.1:1"}});
    EXPECT_EQ(r.status, 0) << r.err;
    EXPECT_EQ(r.out, "Two");
    // the file alone points at a dead endpoint
    r = testkit::run_cli({"extract", "--config", cfg.string()}, html);
    EXPECT_EQ(r.status, 3);
    std::filesystem::remove(cfg);
}

TEST(Cli, EvalWritesReport)
{
    eval::EvalRecord rec;
    rec.id = "faq";
    rec.html = page("13_faq_page.html");
    rec.gold_intervals = IntervalSet::canonicalize({{1, 2}});
    std::ostringstream ds;
    eval::write_jsonl(ds, {rec});
    const auto csv = std::filesystem::temp_directory_path() / "webidx-cli-eval.csv";
    const auto r = testkit::run_cli({"eval", "-", "--scripted-reply", "[[1,2]]", "--csv", csv.string()}, ds.str());
    EXPECT_EQ(r.status, 0) << r.err;
    std::istringstream lines(r.out);
    std::string row;
    std::string summary;
    std::getline(lines, row);
    std::getline(lines, summary);
    EXPECT_EQ(nlohmann::json::parse(row)["exact"], true);
    EXPECT_EQ(nlohmann::json::parse(summary)["summary"]["exact_match_rate"], 1.0);
    EXPECT_NE(testkit::read_file(csv).find("faq,1,1,1,1,"), std::string::npos);
    std::filesystem::remove(csv);
}

TEST(Cli, EvalBadDatasetExitsTwo)
{
    EXPECT_EQ(testkit::run_cli({"eval", "-"}, "{broken\n").status, 2);
}
