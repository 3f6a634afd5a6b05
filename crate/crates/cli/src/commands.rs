use std::fs;
use std::io::{self, Read, Write};
use std::path::Path;

use porecap::automata::build_dfa;
use porecap::block_codec::{
    build_codebook_with, choose_block_length_with, decode_message, encode_message, format_bits, parse_bits,
    BlockCodebook, EncodeMode, DEFAULT_ENUMERATION_CAP as CODEBOOK_ENUMERATION_CAP, DEFAULT_LENGTH_SEARCH_CAP,
};
use porecap::bounds::{bounds, bounds_sweep, CapacityBounds};
use porecap::capacity::{capacity_with, fixed_length_capacities, CapacityOptions};
use porecap::channel::{parse_mapping, Mapping, Readout};
use porecap::greedy_codec::{greedy_max_prefix, greedy_success_bound, monte_carlo_feasibility, GreedyScheme, MonteCarloResult};
use porecap::mapping_space::{balanced_count, capacity_stats_with, CapacityStats, StatsMode, DEFAULT_ENUMERATION_CAP};

use crate::args::*;
use crate::{usage, Failure};

/// Exact enumeration beyond this many mappings needs `--allow-large`.
const LARGE_ENUMERATION: u64 = 10_000_000;
const STATE_CAP_VAR: &str = "PORECAP_STATE_CAP";

type Outcome = std::result::Result<(), Failure>;

pub fn run(cli: Cli) -> Outcome {
    let opts = capacity_options()?;
    let mut out = String::new();
    match cli.command {
        Command::Capacity(a) => capacity(a, &opts, &mut out)?,
        Command::Bounds(a) => {
            check_k(a.k)?;
            let rows = match (a.b, a.sweep_b) {
                (_, Some(max)) => bounds_sweep(a.k, max),
                (Some(b), None) => vec![bounds(a.k, b)],
                (None, None) => return Err(usage("one of --b or --sweep-b is required")),
            };
            bounds_csv(&rows, &mut out);
        }
        Command::Stats(a) => {
            let mode = match (a.exact, a.samples, a.seed) {
                (true, None, None) => StatsMode::Exact,
                (false, Some(samples), Some(seed)) => StatsMode::Sampled { samples, seed },
                _ => return Err(usage("use either --exact or --samples N --seed S")),
            };
            out.push_str(CapacityStats::CSV_HEADER);
            out.push('\n');
            stats_row(a.k, a.b, mode, &a.pool, &opts, &mut out)?;
        }
        Command::BlockCodec(c) => block_codec(c, &opts, &mut out)?,
        Command::Greedy(c) => greedy(c, &mut out)?,
        Command::Figures(FigureCommand::Fig1(a)) => {
            check_k(a.k)?;
            bounds_csv(&bounds_sweep(a.k, a.sweep_b), &mut out);
        }
        Command::Figures(FigureCommand::Fig2(a)) => {
            out.push_str(CapacityStats::CSV_HEADER);
            out.push('\n');
            for &b in &a.exact_b {
                stats_row(a.k, b, StatsMode::Exact, &a.pool, &opts, &mut out)?;
            }
            for &b in &a.sample_b {
                stats_row(a.k, b, StatsMode::Sampled { samples: a.samples, seed: a.seed }, &a.pool, &opts, &mut out)?;
            }
        }
    }
    let mut stdout = io::stdout().lock();
    stdout.write_all(out.as_bytes()).and_then(|_| stdout.flush()).map_err(|e| Failure::Usage(e.into()))
}

fn capacity_options() -> std::result::Result<CapacityOptions, Failure> {
    let mut opts = CapacityOptions::default();
    if let Ok(raw) = std::env::var(STATE_CAP_VAR) {
        opts.state_cap = raw
            .trim()
            .parse()
            .ok()
            .filter(|&cap: &usize| cap > 0)
            .ok_or_else(|| usage(format!("{STATE_CAP_VAR} must be a positive integer, got {raw:?}")))?;
    }
    Ok(opts)
}

fn check_k(k: usize) -> Outcome {
    if k == 0 || k > porecap::channel::MAX_K {
        return Err(usage(format!("k = {k} must lie in 1..={}", porecap::channel::MAX_K)));
    }
    Ok(())
}

fn read_text(path: &Path) -> std::result::Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))
}

fn read_input(path: Option<&Path>) -> std::result::Result<String, Failure> {
    match path {
        Some(p) => read_text(p),
        None => {
            let mut text = String::new();
            io::stdin().read_to_string(&mut text).map_err(|e| usage(format!("cannot read stdin: {e}")))?;
            Ok(text)
        }
    }
}

fn load_mapping(path: &Path) -> std::result::Result<Mapping, Failure> {
    let f = parse_mapping(&read_text(path)?).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    if !f.is_surjective() {
        eprintln!(
            "warning: mapping uses {} of {} levels; capacities below are for the levels actually used",
            f.image_size(),
            f.b()
        );
    }
    Ok(f)
}

fn parse_readout(text: &str) -> std::result::Result<Readout, Failure> {
    text.trim().parse().map_err(|e| usage(format!("invalid readout: {e}")))
}

fn parse_message(text: &str) -> std::result::Result<Vec<bool>, Failure> {
    parse_bits(text).map_err(|e| usage(format!("invalid message: {e}")))
}

fn workers(requested: Option<usize>) -> std::result::Result<usize, Failure> {
    match requested {
        Some(0) => Err(usage("--workers must be positive")),
        Some(w) => Ok(w),
        None => Ok(std::thread::available_parallelism().map_or(1, |n| n.get())),
    }
}

fn capacity(a: CapacityArgs, opts: &CapacityOptions, out: &mut String) -> Outcome {
    let f = load_mapping(&a.mapping)?;
    let result = capacity_with(&f, a.method, opts)?;
    out.push_str(&format!("{:.9}\n", result.capacity_bits_per_base));
    eprintln!(
        "k={} b={} method={} dfa_states={} spectral_radius={:.12}",
        f.k(),
        f.b(),
        result.method,
        result.dfa_states,
        result.spectral_radius
    );
    if a.block_length.is_some() || a.dump_dfa.is_some() {
        let dfa = build_dfa(&f, opts.state_cap)?;
        if let Some(ell) = a.block_length {
            if ell < f.k() {
                return Err(porecap::Error::BlockTooShort { block_length: ell, k: f.k() }.into());
            }
            let (_, rate) = *fixed_length_capacities(&dfa, f.k(), ell).last().expect("ell >= k");
            out.push_str(&format!("{rate:.9}\n"));
        }
        if let Some(path) = a.dump_dfa {
            fs::write(&path, dfa.edge_list()).map_err(|e| usage(format!("cannot write {}: {e}", path.display())))?;
        }
    }
    Ok(())
}

fn bounds_csv(rows: &[CapacityBounds], out: &mut String) {
    out.push_str(CapacityBounds::CSV_HEADER);
    out.push('\n');
    for row in rows {
        out.push_str(&row.csv_row());
        out.push('\n');
    }
}

fn stats_row(k: usize, b: u32, mode: StatsMode, pool: &PoolArgs, opts: &CapacityOptions, out: &mut String) -> Outcome {
    check_k(k)?;
    if mode == StatsMode::Exact && !pool.allow_large {
        match balanced_count(k, b) {
            Some(n) if n > LARGE_ENUMERATION.into() => {
                return Err(usage(format!(
                    "exact enumeration of {n} mappings for k={k}, b={b}; pass --allow-large or use --samples"
                )))
            }
            _ => {}
        }
    }
    let stats = capacity_stats_with(k, b, mode, workers(pool.workers)?, DEFAULT_ENUMERATION_CAP, opts)?;
    eprintln!("{stats}");
    out.push_str(&stats.csv_row());
    out.push('\n');
    Ok(())
}

fn block_codec(c: BlockCommand, opts: &CapacityOptions, out: &mut String) -> Outcome {
    match c {
        BlockCommand::Build(a) => {
            let f = load_mapping(&a.mapping)?;
            let ell = match (a.block_length, a.epsilon) {
                (Some(ell), _) => ell,
                (None, Some(eps)) => choose_block_length_with(&f, eps, DEFAULT_LENGTH_SEARCH_CAP, opts)?,
                (None, None) => return Err(usage("one of --block-length or --epsilon is required")),
            };
            let cb = build_codebook_with(&f, ell, CODEBOOK_ENUMERATION_CAP, opts.state_cap)?;
            eprintln!(
                "block_length={} codewords={} bits_per_block={} chunked_rate={:.9} radix_rate={:.9}",
                cb.block_length(),
                cb.size(),
                cb.bits_per_block(),
                cb.chunked_rate(),
                cb.radix_rate()
            );
            let json = cb.to_json(a.mode);
            match a.output {
                Some(path) => {
                    fs::write(&path, json + "\n").map_err(|e| usage(format!("cannot write {}: {e}", path.display())))?
                }
                None => {
                    out.push_str(&json);
                    out.push('\n');
                }
            }
        }
        BlockCommand::Encode(a) => {
            let (cb, mode) = load_codebook(&a, opts)?;
            let message = parse_message(&read_input(a.input.as_deref())?)?;
            out.push_str(&encode_message(&cb, &message, mode)?.to_string());
            out.push('\n');
        }
        BlockCommand::Decode(a) => {
            let (cb, mode) = load_codebook(&a, opts)?;
            let readout = parse_readout(&read_input(a.input.as_deref())?)?;
            out.push_str(&format_bits(&decode_message(&cb, &readout, mode)?));
            out.push('\n');
        }
    }
    Ok(())
}

fn load_codebook(a: &BlockCodeArgs, opts: &CapacityOptions) -> std::result::Result<(BlockCodebook, EncodeMode), Failure> {
    match (&a.codebook, &a.mapping, a.block_length) {
        (Some(path), None, None) => {
            let (cb, recorded) =
                BlockCodebook::from_json(&read_text(path)?).map_err(|e| usage(format!("{}: {e}", path.display())))?;
            match a.mode {
                Some(mode) if mode != recorded => {
                    Err(usage(format!("--mode {mode} contradicts the codebook's recorded mode {recorded}")))
                }
                _ => Ok((cb, recorded)),
            }
        }
        (None, Some(path), Some(ell)) => {
            let f = load_mapping(path)?;
            let cb = build_codebook_with(&f, ell, CODEBOOK_ENUMERATION_CAP, opts.state_cap)?;
            Ok((cb, a.mode.unwrap_or(EncodeMode::Chunked)))
        }
        _ => Err(usage("use either --codebook PATH or --mapping PATH --block-length L")),
    }
}

fn greedy(c: GreedyCommand, out: &mut String) -> Outcome {
    match c {
        GreedyCommand::Analyze(a) => {
            let f = load_mapping(&a.mapping)?;
            out.push_str("k,max_prefix_len,rate,bound\n");
            match greedy_max_prefix(&f)? {
                Some(ell) => {
                    let rate = 1.0 / (f.k() - ell) as f64;
                    let bound = greedy_success_bound(f.k(), ell);
                    out.push_str(&format!("{},{ell},{rate:.9},{bound:.9}\n", f.k()));
                }
                None => {
                    eprintln!("no prefix length admits the greedy scheme for this mapping");
                    out.push_str(&format!("{},,,\n", f.k()));
                }
            }
        }
        GreedyCommand::Encode(a) => {
            let scheme = GreedyScheme::new(&load_mapping(&a.mapping)?, a.prefix_len)?;
            let message = parse_message(&read_input(a.input.as_deref())?)?;
            out.push_str(&scheme.encode(&message)?.to_string());
            out.push('\n');
        }
        GreedyCommand::Decode(a) => {
            let f = load_mapping(&a.mapping)?;
            let scheme = GreedyScheme::new(&f, a.prefix_len)?;
            let readout = parse_readout(&read_input(a.input.as_deref())?)?;
            out.push_str(&format_bits(&scheme.decode(&readout)?));
            out.push('\n');
        }
        GreedyCommand::Montecarlo(a) => {
            let r = monte_carlo_feasibility(a.k, a.ell, a.trials, a.seed, workers(a.workers)?, a.balanced)?;
            eprintln!(
                "empirical feasibility {:.6}, bound {:.6}, sigma {:.6}",
                r.empirical_rate(),
                r.bound,
                r.sigma()
            );
            out.push_str(MonteCarloResult::CSV_HEADER);
            out.push('\n');
            out.push_str(&r.csv_row());
            out.push('\n');
        }
    }
    Ok(())
}
