use std::io::{self, Write};

use num_bigint::BigUint;
use serde::Serialize;
use serde_json::value::RawValue;

use midylab::expansion::BlockDecomposition;
use midylab::jenkins::JenkinsInstance;
use midylab::midy::MidyQuery;
use midylab::{Certificate, MidySet, MidyVerdict, Natural, OrderRecord, PeriodExpansion, ProgressionTrace};

/// An integer of any size as a bare JSON number.
fn raw_number(n: &BigUint) -> Box<RawValue> {
    RawValue::from_string(n.to_string()).expect("decimal integers are valid JSON numbers")
}

fn emit(out: &mut dyn Write, value: &impl Serialize) -> io::Result<()> {
    let line = serde_json::to_string(value).map_err(io::Error::other)?;
    writeln!(out, "{line}")
}

fn braces(items: &[Natural]) -> String {
    let inner: Vec<String> = items.iter().map(Natural::to_string).collect();
    format!("{{{}}}", inner.join(", "))
}

fn spaced(items: &[Natural]) -> String {
    items.iter().map(Natural::to_string).collect::<Vec<_>>().join(" ")
}

#[derive(Serialize)]
struct OrderJson {
    base: Natural,
    n: Natural,
    order: Natural,
    #[serde(skip_serializing_if = "Option::is_none")]
    naive_order: Option<Natural>,
}

pub fn order(out: &mut dyn Write, json: bool, r: &OrderRecord, naive: Option<Natural>) -> io::Result<()> {
    if json {
        return emit(
            out,
            &OrderJson {
                base: r.base,
                n: r.modulus,
                order: r.order,
                naive_order: naive,
            },
        );
    }
    writeln!(out, "{}", r.order)
}

#[derive(Serialize)]
struct ExpansionJson<'a> {
    base: Natural,
    n: Natural,
    x: Natural,
    order: usize,
    digits: &'a [u32],
    #[serde(skip_serializing_if = "Option::is_none")]
    d: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    blocks: Option<Vec<Box<RawValue>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    sum: Option<Box<RawValue>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    multiple: Option<bool>,
}

pub fn expansion(
    out: &mut dyn Write,
    json: bool,
    e: &PeriodExpansion,
    split: Option<&BlockDecomposition>,
) -> io::Result<()> {
    let multiple = split.map(|s| {
        let modulus = BigUint::from(e.base).pow(s.k as u32) - 1u32;
        (&s.sum % modulus).bits() == 0
    });
    if json {
        return emit(
            out,
            &ExpansionJson {
                base: e.base,
                n: e.modulus,
                x: e.numerator,
                order: e.len(),
                digits: &e.digits,
                d: split.map(|s| s.d),
                blocks: split.map(|s| s.blocks.iter().map(raw_number).collect()),
                sum: split.map(|s| raw_number(&s.sum)),
                multiple,
            },
        );
    }
    writeln!(out, "{}", e.render())?;
    if let Some(s) = split {
        let pieces: Vec<String> = e
            .digits
            .chunks(s.k)
            .map(midylab::expansion::render_digits)
            .collect();
        writeln!(out, "blocks: {}", pieces.join(" "))?;
        writeln!(out, "sum: {}", s.sum)?;
        writeln!(
            out,
            "multiple of {}^{} - 1: {}",
            e.base,
            s.k,
            if multiple == Some(true) { "yes" } else { "no" }
        )?;
    }
    Ok(())
}

#[derive(Serialize)]
struct VerdictJson<'a> {
    base: Natural,
    n: Natural,
    d: Natural,
    holds: bool,
    method: &'static str,
    certificate: Option<&'a Certificate>,
}

pub fn verdicts(out: &mut dyn Write, json: bool, q: &MidyQuery, verdicts: &[MidyVerdict]) -> io::Result<()> {
    for v in verdicts {
        if json {
            emit(
                out,
                &VerdictJson {
                    base: q.base,
                    n: q.modulus,
                    d: q.d,
                    holds: v.holds,
                    method: v.method.as_str(),
                    certificate: v.certificate.as_ref(),
                },
            )?;
        } else {
            let cert = v
                .certificate
                .as_ref()
                .map(|c| format!(" ({c})"))
                .unwrap_or_default();
            writeln!(out, "{}: {}{cert}", v.method.as_str(), v.holds)?;
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct MidySetJson<'a> {
    base: Natural,
    n: Natural,
    order: Natural,
    midy_set: &'a [Natural],
}

pub fn midy_set(out: &mut dyn Write, json: bool, set: &MidySet) -> io::Result<()> {
    if json {
        return emit(
            out,
            &MidySetJson {
                base: set.base,
                n: set.modulus,
                order: set.order,
                midy_set: &set.members,
            },
        );
    }
    writeln!(out, "|{}|_{} = {}", set.base, set.modulus, set.order)?;
    writeln!(out, "M_{}({}) = {}", set.base, set.modulus, braces(&set.members))
}

#[derive(Serialize)]
struct JenkinsJson<'a> {
    base: Natural,
    d: Natural,
    n: Natural,
    factors: &'a [(Natural, u32)],
    route: &'static str,
    holds: bool,
}

pub fn jenkins(
    out: &mut dyn Write,
    json: bool,
    inst: &JenkinsInstance,
    results: &[(&'static str, bool)],
) -> io::Result<()> {
    let n = inst.modulus().map_err(io::Error::other)?;
    let factors: Vec<(Natural, u32)> = inst.primes.iter().map(|p| (p.prime, p.exponent)).collect();
    if !json {
        writeln!(out, "N = {n}, d = {}", inst.d)?;
    }
    for &(route, holds) in results {
        if json {
            emit(
                out,
                &JenkinsJson {
                    base: inst.base,
                    d: inst.d,
                    n,
                    factors: &factors,
                    route,
                    holds,
                },
            )?;
        } else {
            writeln!(out, "{route}: {holds}")?;
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct ProgressionJson {
    base: Natural,
    q: Natural,
    v: u32,
    primes: Vec<Natural>,
    moduli: Vec<Natural>,
}

pub fn progression(out: &mut dyn Write, json: bool, t: &ProgressionTrace) -> io::Result<()> {
    if json {
        return emit(
            out,
            &ProgressionJson {
                base: t.base,
                q: t.q,
                v: t.v,
                primes: t.primes(),
                moduli: t.moduli(),
            },
        );
    }
    writeln!(out, "primes: {}", spaced(&t.primes()))?;
    writeln!(out, "moduli: {}", spaced(&t.moduli()))
}
