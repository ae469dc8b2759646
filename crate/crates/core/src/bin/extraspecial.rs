//! Command-line frontend: closed-form statistics, the bundled reference
//! table, formula-vs-model verification sweeps, cyclicity degrees and the
//! greedy density approximator.
//!
//! Exit codes: 0 success, 1 verification mismatch, 2 usage error,
//! 3 approximation failure.

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use extraspecial::arith;
use extraspecial::cdeg::{self, ApproxError};
use extraspecial::families::{self, FamilySpec};
use extraspecial::fixtures;
use extraspecial::oracle;
use extraspecial::order_stats;

#[derive(Parser)]
#[command(name = "extraspecial", version, about = "Element-order statistics and cyclicity degrees for extraspecial-type p-groups")]
struct Cli {
    /// Emit machine-readable JSON instead of text
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Closed-form statistics for one family member, e.g. `stats esp_m:p=5,n=3`
    Stats {
        /// Family spec: <kind>:p=<p>,n=<n>[,k=<k>]
        spec: String,
    },
    /// Recompute the bundled reference table and flag any deviation
    Table,
    /// Verify closed forms against brute force over a family sweep
    Verify {
        /// Only check groups of order at most this
        #[arg(long, default_value_t = 100_000)]
        max_order: u64,
        /// Primes to sweep
        #[arg(long = "p-list", value_delimiter = ',', default_values_t = vec![2, 3, 5])]
        p_list: Vec<u64>,
        /// Optional extra cap on n
        #[arg(long)]
        n_max: Option<u32>,
        /// Cap on k for the generalized kinds
        #[arg(long, default_value_t = 3)]
        k_max: u32,
        /// Brute-force census budget
        #[arg(long, default_value_t = oracle::DEFAULT_CENSUS_BUDGET)]
        budget: u64,
    },
    /// Cyclicity degree of a modular group (`m:p=5,n=4`) or of a product of
    /// order-p^3 modular groups over distinct odd primes (`3,5,7`)
    Cdeg { what: String },
    /// Greedily approximate a target cyclicity degree from above
    Approx {
        /// Target in [0, 1], as a fraction `a/b` or decimal
        #[arg(long)]
        target: String,
        /// Tolerance in [1e-9, 1/2], fraction or decimal
        #[arg(long = "eps", default_value = "1e-3")]
        eps: String,
        /// Largest prime the scan may examine
        #[arg(long, default_value_t = cdeg::DEFAULT_PRIME_LIMIT)]
        prime_limit: u64,
    },
    /// List the odd primes up to a limit
    Primes {
        #[arg(long)]
        limit: u64,
    },
}

const EXIT_MISMATCH: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_APPROX: u8 = 3;

fn main() -> ExitCode {
    // die quietly when the consumer closes the pipe (e.g. `table | head`)
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    let json = cli.json;
    match cli.command {
        Command::Stats { spec } => cmd_stats(&spec, json),
        Command::Table => cmd_table(json),
        Command::Verify { max_order, p_list, n_max, k_max, budget } => {
            cmd_verify(max_order, &p_list, n_max, k_max, budget, json)
        }
        Command::Cdeg { what } => cmd_cdeg(&what, json),
        Command::Approx { target, eps, prime_limit } => cmd_approx(&target, &eps, prime_limit, json),
        Command::Primes { limit } => cmd_primes(limit, json),
    }
}

fn usage_error(message: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {message}");
    ExitCode::from(EXIT_USAGE)
}

fn cmd_stats(spec: &str, json: bool) -> ExitCode {
    let spec: FamilySpec = match spec.parse() {
        Ok(s) => s,
        Err(e) => return usage_error(e),
    };
    let stats = match order_stats::group_stats(&spec) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_MISMATCH);
        }
    };
    if json {
        println!("{}", stats.to_json());
    } else {
        println!("spec: {spec}");
        println!("order: {}", stats.order);
        println!("exponent: {}", stats.exponent);
        println!("census: {}", stats.census.render());
        println!("psi: {}", stats.psi);
        let cyclic: Vec<String> =
            stats.cyclic_counts.iter().map(|(d, c)| format!("{d}:{c}")).collect();
        println!("cyclic: {}", cyclic.join(" "));
        println!("total_cyclic: {}", stats.total_cyclic);
    }
    ExitCode::SUCCESS
}

fn cmd_table(json: bool) -> ExitCode {
    let fixtures = fixtures::load();
    let mut all_ok = true;
    let mut rows_json = Vec::new();
    if !json {
        println!(
            "{:<20} {:>7} {:>7} {:>8} {:>8} {:>9}  check",
            "group", "order", "gap-id", "n_p", "n_p2", "psi"
        );
    }
    for row in &fixtures.census_rows {
        let spec = row.family_spec();
        let census = order_stats::closed_form_census(&spec);
        let p = spec.p();
        let computed_order = spec.group_order().to_string();
        let computed_np = census.count(p).to_string();
        let computed_np2 = census.count(p * p).to_string();
        let expected_np2 = row.n_p2.clone().unwrap_or_else(|| "0".to_string());
        let computed_psi = order_stats::psi_closed_form(&spec).to_string();
        let ok = computed_order == row.order
            && computed_np == row.n_p
            && computed_np2 == expected_np2
            && computed_psi == row.psi;
        all_ok &= ok;
        if json {
            let mut obj = serde_json::Map::new();
            obj.insert("label".into(), row.label.clone().into());
            obj.insert("spec".into(), row.spec.clone().into());
            obj.insert("gap_id".into(), row.gap_id.clone().into());
            obj.insert("order".into(), computed_order.into());
            obj.insert("n_p".into(), computed_np.into());
            obj.insert("n_p2".into(), row.n_p2.as_ref().map(|_| computed_np2.clone().into()).unwrap_or(serde_json::Value::Null));
            obj.insert("psi".into(), computed_psi.into());
            obj.insert("ok".into(), ok.into());
            rows_json.push(serde_json::Value::Object(obj));
        } else {
            println!(
                "{:<20} {:>7} {:>7} {:>8} {:>8} {:>9}  {}",
                row.label,
                computed_order,
                row.gap_id,
                computed_np,
                row.n_p2.as_deref().unwrap_or("-"),
                computed_psi,
                if ok { "ok" } else { "DEVIATES" }
            );
        }
    }
    if json {
        println!("{}", serde_json::Value::Array(rows_json));
    }
    if all_ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_MISMATCH)
    }
}

fn cmd_verify(
    max_order: u64,
    p_list: &[u64],
    n_max: Option<u32>,
    k_max: u32,
    budget: u64,
    json: bool,
) -> ExitCode {
    for &p in p_list {
        if !arith::is_prime(p) {
            return usage_error(format!("{p} is not prime"));
        }
    }
    let mut specs = families::enumerate_specs(p_list, max_order.min(budget), k_max);
    if let Some(cap) = n_max {
        specs.retain(|s| s.n() <= cap);
    }
    let mut all_pass = true;
    let mut checked = 0usize;
    for spec in &specs {
        let verdict = match oracle::verify_family(spec, budget) {
            Ok(v) => v,
            Err(e) => {
                eprintln!("error: {e}");
                return ExitCode::from(EXIT_MISMATCH);
            }
        };
        checked += 1;
        all_pass &= verdict.pass();
        if json {
            for line in verdict.to_json_lines() {
                println!("{line}");
            }
        } else {
            let state = if verdict.pass() { "pass" } else { "FAIL" };
            println!("{spec}: {state}");
            for row in verdict.rows.iter().filter(|r| !r.matches()) {
                println!("  {} formula={} oracle={}", row.quantity, row.formula, row.oracle);
            }
        }
    }
    if !json {
        println!(
            "{checked} specs checked, {}",
            if all_pass { "all pass" } else { "MISMATCHES FOUND" }
        );
    }
    if all_pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_MISMATCH)
    }
}

fn cmd_cdeg(what: &str, json: bool) -> ExitCode {
    let what = what.trim();
    let result = if let Some(params) = what.strip_prefix("m:") {
        let mut p = None;
        let mut n = None;
        for item in params.split(',') {
            match item.trim().split_once('=') {
                Some(("p", v)) => p = v.trim().parse::<u64>().ok(),
                Some(("n", v)) => n = v.trim().parse::<u32>().ok(),
                _ => return usage_error(format!("bad modular descriptor {what:?}")),
            }
        }
        match (p, n) {
            (Some(p), Some(n)) => cdeg::cdeg_modular(p, n).map_err(|e| e.to_string()),
            _ => return usage_error("modular descriptor needs p=<p>,n=<n>"),
        }
    } else {
        let primes: Result<Vec<u64>, _> =
            what.split(',').map(|t| t.trim().parse::<u64>()).collect();
        match primes {
            Ok(primes) => cdeg::cdeg_product(&primes).map_err(|e| e.to_string()),
            Err(_) => return usage_error(format!("expected m:p=..,n=.. or a prime list, got {what:?}")),
        }
    };
    match result {
        Ok(value) => {
            if json {
                let mut obj = serde_json::Map::new();
                obj.insert("input".into(), what.into());
                obj.insert("cdeg".into(), arith::fraction_string(&value).into());
                obj.insert("cdeg_decimal".into(), arith::decimal_string(&value, 50).into());
                println!("{}", serde_json::Value::Object(obj));
            } else {
                println!("cdeg: {}", arith::fraction_string(&value));
                println!("decimal: {}", arith::decimal_string(&value, 50));
            }
            ExitCode::SUCCESS
        }
        Err(e) => usage_error(e),
    }
}

fn cmd_approx(target: &str, eps: &str, prime_limit: u64, json: bool) -> ExitCode {
    let target = match arith::parse_rational(target) {
        Ok(t) => t,
        Err(e) => return usage_error(format!("bad target: {e}")),
    };
    let eps = match arith::parse_rational(eps) {
        Ok(e) => e,
        Err(e) => return usage_error(format!("bad epsilon: {e}")),
    };
    match cdeg::approximate_cdeg(&target, &eps, prime_limit) {
        Ok(selection) => {
            print_selection(&selection, json);
            ExitCode::SUCCESS
        }
        Err(err @ (ApproxError::TargetOutOfRange | ApproxError::EpsilonOutOfRange | ApproxError::BadPrimeLimit)) => {
            usage_error(err)
        }
        Err(ApproxError::ZeroTarget) => {
            eprintln!("error: {}", ApproxError::ZeroTarget);
            ExitCode::from(EXIT_APPROX)
        }
        Err(ApproxError::LimitExhausted { limit, gap, best }) => {
            eprintln!("error: prime limit {limit} exhausted; best selection gap {gap}");
            print_selection(&best, json);
            ExitCode::from(EXIT_APPROX)
        }
    }
}

fn print_selection(selection: &cdeg::PrimeSelection, json: bool) {
    if json {
        println!("{}", selection.to_json());
        return;
    }
    println!("target: {}", arith::fraction_string(&selection.target));
    println!("epsilon: {}", arith::fraction_string(&selection.epsilon));
    let primes: Vec<String> = selection.primes.iter().map(u64::to_string).collect();
    println!("primes ({}): {}", primes.len(), primes.join(" "));
    println!("achieved: {}", arith::fraction_string(&selection.achieved));
    println!("achieved_decimal: {}", arith::decimal_string(&selection.achieved, 50));
    println!("gap: {}", arith::fraction_string(&selection.gap));
    if let Some(q) = selection.scanned_up_to {
        println!("scanned_up_to: {q}");
    }
}

fn cmd_primes(limit: u64, json: bool) -> ExitCode {
    if limit < 3 {
        return usage_error("limit must be at least 3");
    }
    let primes = cdeg::odd_primes(limit);
    if json {
        let mut obj = serde_json::Map::new();
        obj.insert("limit".into(), limit.into());
        obj.insert("primes".into(), primes.into());
        println!("{}", serde_json::Value::Object(obj));
    } else {
        let text: Vec<String> = primes.iter().map(u64::to_string).collect();
        println!("{}", text.join(" "));
    }
    ExitCode::SUCCESS
}
