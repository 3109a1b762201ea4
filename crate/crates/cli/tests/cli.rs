use std::process::Command;

use midylab::{midy_check_ppl2, midy_set, order_mod, period_digits, Natural};
use serde_json::Value;

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("midylab").chain(args.iter().copied());
    let code = midylab_cli::run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json_lines(args: &[&str]) -> Vec<Value> {
    let mut full = vec!["--format", "json"];
    full.extend_from_slice(args);
    let (code, out, err) = run(&full);
    assert_eq!(code, 0, "{err}");
    out.lines().map(|l| serde_json::from_str(l).unwrap()).collect()
}

fn nat(v: &Value) -> Natural {
    v.as_u64().unwrap() as Natural
}

#[test]
fn order_of_ten_mod_thirteen() {
    assert_eq!(run(&["order", "--base", "10", "13"]), (0, "6\n".into(), String::new()));
    let v = &json_lines(&["order", "--base", "10", "13", "--naive-check"])[0];
    assert_eq!(v["naive_order"], 6);
    assert_eq!(nat(&v["order"]), order_mod(nat(&v["base"]), nat(&v["n"])).unwrap());
}

#[test]
fn expand_reports_blocks_and_sum() {
    let (code, out, _) = run(&["expand", "--base", "10", "1", "13", "--blocks", "3"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("076923\nblocks: 07 69 23\nsum: 99\n"));

    let v = &json_lines(&["expand", "--base", "8", "1", "75", "--blocks", "4"])[0];
    assert_eq!(v["sum"], 65534);
    assert_eq!(v["blocks"], serde_json::json!([436, 29709, 21408, 13981]));
    assert_eq!(v["multiple"], true);
    let digits: Vec<u32> = serde_json::from_value(v["digits"].clone()).unwrap();
    assert_eq!(digits, period_digits(nat(&v["x"]), nat(&v["n"]), nat(&v["base"])).unwrap().digits);

    let v = &json_lines(&["expand", "--base", "8", "1", "75", "--blocks", "5"])[0];
    assert_eq!(v["multiple"], false);
}

#[test]
fn midy_check_all_methods_reject_five_for_seventy_five() {
    let lines = json_lines(&["midy-check", "--base", "8", "75", "5", "--method", "all"]);
    let methods: Vec<&str> = lines.iter().map(|v| v["method"].as_str().unwrap()).collect();
    assert_eq!(methods, ["ppl2", "ppl3", "direct"]);
    assert!(lines.iter().all(|v| v["holds"] == false));
    assert_eq!(lines[0]["certificate"]["kind"], "violating_prime");
    assert_eq!(lines[0]["certificate"]["p"], 3);
    assert_eq!(lines[2]["certificate"]["kind"], "failing_numerator");

    let (code, out, _) = run(&["midy-check", "--base", "10", "13", "3"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("ppl2: true"));
}

#[test]
fn midy_set_json_round_trips() {
    let (code, out, _) = run(&["--format", "json", "midy-set", "--base", "8", "75"]);
    assert_eq!(code, 0);
    assert_eq!(out, "{\"base\":8,\"n\":75,\"order\":20,\"midy_set\":[4,20]}\n");
    for (b, n) in [(10, 13), (10, 21), (2, 255), (3, 40)] {
        let v = &json_lines(&["midy-set", "--base", &b.to_string(), &n.to_string()])[0];
        let members: Vec<Natural> = serde_json::from_value(v["midy_set"].clone()).unwrap();
        assert_eq!(members, midy_set(b, n).unwrap().members);
        for d in members {
            assert!(midy_check_ppl2(b, n, d).unwrap().holds);
        }
    }
    let (_, out, _) = run(&["midy-set", "--base", "10", "13"]);
    assert_eq!(out, "|10|_13 = 6\nM_10(13) = {2, 3, 6}\n");
}

#[test]
fn jenkins_routes() {
    let lines = json_lines(&["jenkins", "--base", "10", "--d", "3", "--prime", "7:1", "--prime", "13:1"]);
    assert_eq!(lines.len(), 2);
    assert!(lines.iter().all(|v| v["holds"] == true && v["n"] == 91));
    let (code, out, _) = run(&["jenkins", "--base", "10", "--d", "2", "--prime", "11:1", "--prime", "101:1"]);
    assert_eq!(code, 0);
    assert_eq!(out, "N = 1111, d = 2\nformula: false\ngcd: false\n");
    let (code, _, _) = run(&["jenkins", "--base", "10", "--d", "3", "--prime", "7:1", "--route", "gcd"]);
    assert_eq!(code, 0);
}

#[test]
fn primes_progression() {
    let v = &json_lines(&["primes", "--base", "10", "--q", "3", "--v", "1", "--count", "2"])[0];
    assert_eq!(v["primes"], serde_json::json!([7, 19]));
    assert_eq!(v["moduli"], serde_json::json!([3, 9]));
    let (code, out, _) = run(&["primes", "--base", "10", "--q", "2", "--v", "1", "--count", "2"]);
    assert_eq!(code, 0);
    assert_eq!(out, "primes: 7 17\nmoduli: 2 8\n");
}

#[test]
fn scan_formats() {
    let (code, out, _) = run(&["scan", "--base", "10", "--from", "2", "--to", "13"]);
    assert_eq!(code, 0);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("n,base,order,midy_set"));
    assert!(out.contains("\n13,10,6,2;3;6\n"));
    assert!(!out.contains("\n10,"));
    let rows = json_lines(&["scan", "--base", "10", "--from", "2", "--to", "13", "--jobs", "3"]);
    let ns: Vec<u64> = rows.iter().map(|v| v["n"].as_u64().unwrap()).collect();
    assert_eq!(ns, [3, 7, 9, 11, 13]);
}

#[test]
fn exit_codes() {
    // Usage errors.
    assert_eq!(run(&["frobnicate"]).0, 2);
    assert_eq!(run(&["order", "--base", "63", "13"]).0, 2);
    assert_eq!(run(&["midy-check", "--base", "10", "13", "3", "--method", "ppl9"]).0, 2);
    let (code, _, err) = run(&["--format", "csv", "order", "--base", "10", "13"]);
    assert_eq!(code, 2);
    assert!(err.contains("csv"));
    // Domain and precondition errors.
    assert_eq!(run(&["order", "--base", "10", "15"]).0, 1);
    assert_eq!(run(&["order", "--base", "10", "0"]).0, 1);
    assert_eq!(run(&["midy-check", "--base", "10", "13", "4"]).0, 1);
    assert_eq!(run(&["expand", "--base", "10", "0", "13"]).0, 1);
    assert_eq!(run(&["jenkins", "--base", "10", "--d", "4", "--prime", "7:1"]).0, 1);
    // Bounded search exhausted.
    assert_eq!(run(&["primes", "--base", "10", "--q", "3", "--v", "1", "--count", "3", "--bound", "5"]).0, 3);
    // Help is not an error.
    assert_eq!(run(&["--help"]).0, 0);
}

#[test]
fn cache_file_from_environment() {
    let dir = std::env::temp_dir().join(format!("midylab-cli-cache-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("factors.txt");
    // A wrong entry is detected and replaced by a fresh factorization.
    std::fs::write(&path, "75=3^1*5^1\n").unwrap();
    let bin = env!("CARGO_BIN_EXE_midylab");
    let run_bin = || {
        Command::new(bin)
            .args(["--format", "json", "midy-set", "--base", "8", "75"])
            .env("MIDYLAB_CACHE", &path)
            .output()
            .unwrap()
    };
    let first = run_bin();
    assert!(first.status.success());
    assert_eq!(first.stdout, b"{\"base\":8,\"n\":75,\"order\":20,\"midy_set\":[4,20]}\n");
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.ends_with("75=3^1*5^2\n"), "{text}");
    let second = run_bin();
    assert_eq!(second.stdout, first.stdout);
    assert_eq!(std::fs::read_to_string(&path).unwrap(), text);
    std::fs::remove_dir_all(&dir).unwrap();
}
