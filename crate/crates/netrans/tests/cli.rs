use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn netrans(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_netrans"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn ok(dir: &Path, args: &[&str]) -> String {
    let out = netrans(dir, args);
    assert!(
        out.status.success(),
        "netrans {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn write(dir: &Path, name: &str, text: &str) {
    fs::write(dir.join(name), text).unwrap();
}

fn read(dir: &Path, name: &str) -> String {
    fs::read_to_string(dir.join(name)).unwrap()
}

/// The embassy sentence with gazetteers and a two-entry lexicon.
fn embassy(dir: &Path) {
    write(dir, "c.zh", "德国 重新 开放 驻 利比亚 大使馆\n");
    write(dir, "c.en", "Germany reopens embassy in Libya\n");
    write(dir, "g.zh", "德国\tLOC\n利比亚\tLOC\n");
    write(dir, "g.en", "Germany\tLOC\nLibya\tLOC\n");
    write(dir, "lex.tsv", "德国\tGermany\tLOC\n利比亚\tLibya\tLOC\n");
}

fn align_embassy(dir: &Path, extra: &[&str]) -> Output {
    let mut args = vec![
        "align", "--src", "c.zh", "--tgt", "c.en", "--src-gazetteer", "g.zh", "--tgt-gazetteer", "g.en",
        "--s2t-lexicon", "lex.tsv", "--t2s-lexicon", "lex.tsv", "--out", "al.tsv", "--pairs-out", "pairs.tsv",
    ];
    args.extend(extra);
    netrans(dir, &args)
}

#[test]
fn embassy_example_rewrites_with_placeholders() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    embassy(d);
    assert_eq!(code(&align_embassy(d, &[])), 0);
    assert_eq!(read(d, "al.tsv"), "0\t0\t1\t0\t1\tLOC\t1\tboth\n0\t4\t5\t4\t5\tLOC\t1\tboth\n");
    assert_eq!(read(d, "pairs.tsv"), "利比亚\tLibya\tLOC\t1\n德国\tGermany\tLOC\t1\n");
    ok(d, &[
        "replace", "--src", "c.zh", "--tgt", "c.en", "--alignments", "al.tsv", "--out-src", "r.zh",
        "--out-tgt", "r.en", "--symbols", "sym.tsv",
    ]);
    assert_eq!(read(d, "r.zh"), "LOC1 重新 开放 驻 LOC2 大使馆\n");
    assert_eq!(read(d, "r.en"), "LOC1 reopens embassy in LOC2\n");
    assert_eq!(read(d, "sym.tsv"), "0\tLOC1\t德国\tLOC\tGermany\n0\tLOC2\t利比亚\tLOC\tLibya\n");

    ok(d, &["extract-lex", "--pairs", "pairs.tsv", "--out", "table.tsv"]);
    ok(d, &["restore", "--input", "r.en", "--symbols", "sym.tsv", "--table", "table.tsv", "--out", "back.en"]);
    assert_eq!(read(d, "back.en"), read(d, "c.en"));
}

#[test]
fn align_direction_and_threshold_flags() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    embassy(d);
    assert_eq!(code(&align_embassy(d, &["--directions", "s2t"])), 0);
    let al = read(d, "al.tsv");
    assert!(!al.is_empty() && al.lines().all(|l| l.ends_with("\ts2t")), "{al}");

    let out = align_embassy(d, &["--threshold", "1.01"]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("threshold"));
    assert_eq!(code(&align_embassy(d, &["--directions", "sideways"])), 1);
    // recognizers are required
    let out = netrans(d, &["align", "--src", "c.zh", "--tgt", "c.en", "--out", "x.tsv"]);
    assert_eq!(code(&out), 1);
}

#[test]
fn restore_without_translations_reports_and_succeeds() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    write(d, "out.en", "PER1 arrived on NT1 in LOC1 with NT2\n");
    write(d, "sym.tsv", "0\tPER1\t纳布\tPER\n0\tNT1\t九月 六日\tNT\n0\tLOC1\t拉马\tLOC\n");
    let stdout = ok(d, &["restore", "--input", "out.en", "--symbols", "sym.tsv", "--out", "back.en"]);
    assert_eq!(read(d, "back.en"), "纳布 arrived on September 6 in 拉马 with\n");
    assert!(stdout.contains("from rules: 1"), "{stdout}");
    assert!(stdout.contains("copied untranslated: 2"), "{stdout}");
    assert!(stdout.contains("dropped unknown placeholders: 1"), "{stdout}");
    assert!(stdout.contains("warnings: 3"), "{stdout}");
}

#[test]
fn train_writes_model_and_log() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    write(d, "p.tsv", "柏林\tberlin\tLOC\n巴黎\tbali\tLOC\n");
    let train = |out: &str, seed: &str| {
        ok(d, &[
            "train-ne", "--pairs", "p.tsv", "--out", out, "--hidden", "8", "--embed", "8", "--max-epochs", "3",
            "--seed", seed,
        ])
    };
    train("a.bin", "7");
    train("b.bin", "7");
    train("c.bin", "8");
    let log = read(d, "a.bin.log");
    assert!(log.starts_with("epoch\ttrain_loss\tdev_loss\n"));
    assert!(log.lines().count() >= 2);
    let model = fs::read(d.join("a.bin")).unwrap();
    assert_eq!(model, fs::read(d.join("b.bin")).unwrap());
    assert_ne!(model, fs::read(d.join("c.bin")).unwrap());

    let scores = ok(d, &["score-ne", "--model", "a.bin", "--pairs", "p.tsv"]);
    assert_eq!(scores.lines().count(), 2);
    assert!(scores.lines().all(|l| l.split('\t').nth(2).unwrap().parse::<f64>().unwrap() < 0.0));
    write(d, "in.txt", "柏林\n");
    let nbest = ok(d, &["translate-ne", "--model", "a.bin", "--input", "in.txt", "--beam", "3", "--nbest", "3"]);
    assert_eq!(nbest.lines().count(), 3);
}

#[test]
fn missing_input_names_the_path() {
    let dir = tempfile::tempdir().unwrap();
    let out = netrans(dir.path(), &["train-ne", "--pairs", "nowhere.tsv", "--out", "m.bin"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("nowhere.tsv"));
}

#[test]
fn usage_errors_and_help() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert_eq!(code(&netrans(d, &["align", "--no-such-flag"])), 1);
    assert_eq!(code(&netrans(d, &["frobnicate"])), 1);
    let help = netrans(d, &["align", "--help"]);
    assert_eq!(code(&help), 0);
    let text = String::from_utf8_lossy(&help.stdout);
    for flag in [
        "--src", "--tgt", "--annotations", "--src-gazetteer", "--s2t-model", "--t2s-lexicon", "--threshold",
        "--max-ngram", "--beam", "--directions", "--out", "--pairs-out", "--seed", "--jobs", "--config",
    ] {
        assert!(text.contains(flag), "align --help lacks {flag}");
    }
}

#[test]
fn config_file_supplies_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    embassy(d);
    fs::create_dir(d.join("conf")).unwrap();
    write(d, "conf/align.conf", "# paths are relative to this file\nsrc = ../c.zh\ntgt = ../c.en\nsrc_gazetteer = ../g.zh\ntgt-gazetteer = ../g.en\ns2t-lexicon = ../lex.tsv\nt2s-lexicon = ../lex.tsv\nout = ../from_conf.tsv\ndirections = t2s\n");
    ok(d, &["align", "--config", "conf/align.conf"]);
    let al = read(d, "from_conf.tsv");
    assert!(!al.is_empty() && al.lines().all(|l| l.ends_with("\tt2s")), "{al}");
    // command-line flags win
    ok(d, &["align", "--config", "conf/align.conf", "--directions", "both"]);
    let al = read(d, "from_conf.tsv");
    assert!(!al.is_empty() && al.lines().all(|l| l.ends_with("\tboth")), "{al}");

    write(d, "bad.conf", "treshold = 0.5\n");
    let out = netrans(d, &["align", "--config", "bad.conf"]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("treshold"));
}

#[test]
fn evaluation_reports() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    write(d, "ref.tsv", "柏林\tberlin\tLOC\n巴黎\tparis\tLOC\n");
    write(d, "hyp.tsv", "柏林\tBerlin\tLOC\n巴黎\tparus\tLOC\n");
    let table = ok(d, &["eval-ne", "--hyp", "ref.tsv", "--hyp", "hyp.tsv", "--ref", "ref.tsv"]);
    assert_eq!(
        table,
        "system\tPER\tLOC\tNT\tall\nref\t-\t1.0000\t-\t1.0000\nhyp\t-\t0.5000\t-\t0.5000\n"
    );
    write(d, "empty.tsv", "");
    assert_eq!(code(&netrans(d, &["eval-ne", "--hyp", "empty.tsv", "--ref", "empty.tsv"])), 2);
    assert_eq!(code(&netrans(d, &["eval-ne", "--hyp", "empty.tsv", "--ref", "ref.tsv"])), 2);

    write(d, "gold.tsv", "0\t0\t1\t0\t1\tLOC\t1\tboth\n0\t2\t3\t3\t4\tPER\t1\tboth\n");
    write(d, "half.tsv", "0\t0\t1\t0\t1\tLOC\t0.9\ts2t\n");
    write(d, "off.tsv", "0\t0\t1\t0\t2\tLOC\t0.9\ts2t\n");
    let all = ok(d, &["eval-align", "--pred", "gold.tsv", "--gold", "gold.tsv"]);
    assert!(all.contains("all\t1.0000\t1.0000\t1.0000\t2\t2\t2"), "{all}");
    let half = ok(d, &["eval-align", "--pred", "half.tsv", "--gold", "gold.tsv"]);
    assert!(half.contains("all\t1.0000\t0.5000\t0.6667\t1\t2\t1"), "{half}");
    let off = ok(d, &["eval-align", "--pred", "off.tsv", "--gold", "gold.tsv"]);
    assert!(off.contains("all\t0.0000\t0.0000\t0.0000\t1\t2\t0"), "{off}");
}

#[test]
fn small_tools() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert_eq!(ok(d, &["sim", "bolin", "berlin"]), "ed\tlcs\tsim\n3\t4\t0.8\n");
    assert_eq!(ok(d, &["numnorm", "百分之四点二"]), "42\n");
    assert_eq!(ok(d, &["numnorm", "--lang", "en", "4,200"]), "42\n");
    let gc = netrans(d, &["gradcheck"]);
    assert_eq!(code(&gc), 0);
    // an impossible tolerance is reported as a numerical failure
    assert_eq!(code(&netrans(d, &["gradcheck", "--tolerance", "0"])), 3);
}

#[test]
fn test_mode_replacement() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    write(d, "in.zh", "德国 重新 开放 驻 利比亚 大使馆\nLOC1 是 一个 词\n");
    write(d, "g.zh", "德国\tLOC\n利比亚\tLOC\n");
    write(d, "vocab.txt", "德国\n重新\n开放\n");
    ok(d, &["replace", "--input", "in.zh", "--gazetteer", "g.zh", "--no-numeric", "--out", "t.zh", "--symbols", "s.tsv"]);
    assert_eq!(read(d, "t.zh"), "LOC1 重新 开放 驻 LOC2 大使馆\n\\LOC1 是 一个 词\n");
    ok(d, &[
        "replace", "--input", "in.zh", "--gazetteer", "g.zh", "--no-numeric", "--vocab", "vocab.txt", "--oov-only", "--out",
        "o.zh", "--symbols", "o.tsv",
    ]);
    assert_eq!(read(d, "o.zh"), "德国 重新 开放 驻 LOC1 大使馆\n\\LOC1 是 一个 词\n");
    assert_eq!(read(d, "o.tsv"), "0\tLOC1\t利比亚\tLOC\n");
}
