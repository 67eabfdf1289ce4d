mod args;
mod commands;
mod output;

use std::process::ExitCode;

use clap::Parser;
use serde_json::json;

use stab_core::StabError;

use args::{Cli, Command};
use commands::Ctx;

fn exit_code(e: &StabError) -> u8 {
    match e {
        StabError::NeedsOverride { .. } => 3,
        StabError::Resource(_) => 4,
        StabError::Domain(_) | StabError::Parse(_) | StabError::NotApplicable(_) => 2,
        StabError::Io(_) => 1,
    }
}

fn kind(e: &StabError) -> &'static str {
    match e {
        StabError::NeedsOverride { .. } => "needs-override",
        StabError::Resource(_) => "resource",
        StabError::Domain(_) => "domain",
        StabError::Parse(_) => "parse",
        StabError::NotApplicable(_) => "not-applicable",
        StabError::Io(_) => "io",
    }
}

fn fail(kind: &str, message: String, code: u8, extra: serde_json::Value) -> ExitCode {
    let mut body = json!({"schema": output::SCHEMA, "error": {"kind": kind, "message": message, "exit_code": code}});
    if let serde_json::Value::Object(m) = extra {
        for (k, v) in m {
            body["error"][k] = v;
        }
    }
    eprintln!("{body}");
    ExitCode::from(code)
}

fn run(cli: &Cli) -> stab_core::Result<commands::Output> {
    let ctx = Ctx {
        workers: cli.workers.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get())),
        seed: cli.seed,
        cache_dir: cli.cache_dir.clone().or_else(stab_core::arith::cache_dir),
    };
    match &cli.command {
        Command::Symbol { a, b, place } => commands::symbol(*a, *b, place),
        Command::Solvable { s, t, field } => commands::solvable(*s, *t, field.as_deref()),
        Command::Point { s, t } => commands::point(*s, *t),
        Command::Density { p, oracle_depth } => commands::density(*p, *oracle_depth),
        Command::GroupDelta { generators, degree } => commands::group_delta(generators, *degree),
        Command::Field { command } => commands::field(command, &ctx),
        Command::Count(args) => commands::count(args, &ctx),
        Command::StableCount { bound, signs, fixture } => commands::stable_count(*bound, signs, fixture, &ctx),
        Command::Predict { like, constant } => commands::predict(like, constant),
        Command::Compare { ladder, like, constant } => commands::compare(ladder, like, constant, &ctx),
        Command::Sieve { command } => commands::sieve(command),
    }
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => return fail("usage", e.to_string().trim().to_string(), 2, json!({})),
    };
    match run(&cli) {
        Ok(out) => {
            print!("{}", output::render(&cli, &argv[1..], &out));
            ExitCode::SUCCESS
        }
        Err(e) => {
            let extra = match &e {
                StabError::NeedsOverride { prime, .. } => json!({"prime": prime}),
                _ => json!({}),
            };
            fail(kind(&e), e.to_string(), exit_code(&e), extra)
        }
    }
}
