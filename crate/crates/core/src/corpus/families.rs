use crate::circuit::{Circuit, GateType};
use crate::synth::{stitch_top, StitchRecipe};

use super::builder::Builder;
use super::{CorpusError, DesignSpec, Family, Style};

pub(crate) fn bit(base: &str, i: u32) -> String {
    format!("{base}_{i}_")
}

/// `base_{n-1}_ .. base_0_`, most significant first.
pub(crate) fn bus(base: &str, n: u32) -> Vec<String> {
    (0..n).rev().map(|i| bit(base, i)).collect()
}

pub(crate) fn module_name(family: Family, width: u32) -> String {
    match family {
        Family::Adder => format!("adder_{width}bit"),
        Family::Subtractor => format!("subtractor_{width}bit"),
        Family::Mux => format!("mux_{width}to1"),
        Family::Decoder => format!("decoder_{width}to{}", 1u32 << width),
        Family::Alu => format!("alu_{width}bit"),
    }
}

pub(crate) fn ports(family: Family, width: u32) -> (Vec<String>, Vec<String>) {
    let n = width;
    match family {
        Family::Adder => {
            let mut outs = bus("sum", n);
            outs.push("cout".into());
            ([bus("a", n), bus("b", n)].concat(), outs)
        }
        Family::Subtractor => {
            let mut outs = bus("diff", n);
            outs.push("borrow".into());
            ([bus("a", n), bus("b", n)].concat(), outs)
        }
        Family::Mux => ([bus("d", n), bus("sel", n.trailing_zeros())].concat(), vec!["y".into()]),
        Family::Decoder => (bus("sel", n), bus("out", 1 << n)),
        Family::Alu => {
            let mut ins = [bus("a", n), bus("b", n)].concat();
            ins.extend(["s_0".to_string(), "s_m".to_string()]);
            (ins, bus("y", n))
        }
    }
}

fn lsb_first(base: &str, n: u32) -> Vec<String> {
    (0..n).map(|i| bit(base, i)).collect()
}

/// Carries into every bit position from generate/propagate signals, built
/// as balanced trees: c_i = OR_j<i (g_j AND p_{j+1} .. p_{i-1}).
fn lookahead(b: &mut Builder, g: &[String], p: &[String]) -> Vec<String> {
    let n = g.len();
    let mut carries = Vec::with_capacity(n + 1);
    for i in 1..=n {
        let terms: Vec<String> = (0..i)
            .map(|j| {
                let mut lits = p[j + 1..i].to_vec();
                lits.push(g[j].clone());
                b.tree(&lits, Builder::and)
            })
            .collect();
        carries.push(b.tree(&terms, Builder::or));
    }
    carries
}

fn adder(b: &mut Builder, n: u32, style: Style) -> Vec<String> {
    let (a, bb) = (lsb_first("a", n), lsb_first("b", n));
    let mut sums = Vec::with_capacity(n as usize + 1);
    match style {
        Style::Ripple => {
            let mut carry: Option<String> = None;
            for i in 0..n as usize {
                let p = b.xor(&a[i], &bb[i]);
                let g = b.and(&a[i], &bb[i]);
                match carry {
                    None => {
                        sums.push(p);
                        carry = Some(g);
                    }
                    Some(c) => {
                        sums.push(b.xor(&p, &c));
                        let t = b.and(&p, &c);
                        carry = Some(b.or(&g, &t));
                    }
                }
            }
            sums.reverse();
            sums.push(carry.expect("width >= 1"));
        }
        Style::Tree => {
            let p: Vec<String> = (0..n as usize).map(|i| b.xor(&a[i], &bb[i])).collect();
            let g: Vec<String> = (0..n as usize).map(|i| b.and(&a[i], &bb[i])).collect();
            let c = lookahead(b, &g, &p);
            sums.push(p[0].clone());
            for i in 1..n as usize {
                sums.push(b.xor(&p[i], &c[i - 1]));
            }
            sums.reverse();
            sums.push(c[n as usize - 1].clone());
        }
    }
    sums
}

fn subtractor(b: &mut Builder, n: u32, style: Style) -> Vec<String> {
    let (a, bb) = (lsb_first("a", n), lsb_first("b", n));
    let mut diffs = Vec::with_capacity(n as usize + 1);
    match style {
        Style::Ripple => {
            let mut borrow: Option<String> = None;
            for i in 0..n as usize {
                let p = b.xor(&a[i], &bb[i]);
                let na = b.not(&a[i]);
                let g = b.and(&na, &bb[i]);
                match borrow {
                    None => {
                        diffs.push(p);
                        borrow = Some(g);
                    }
                    Some(br) => {
                        diffs.push(b.xor(&p, &br));
                        let np = b.not(&p);
                        let t = b.and(&np, &br);
                        borrow = Some(b.or(&g, &t));
                    }
                }
            }
            diffs.reverse();
            diffs.push(borrow.expect("width >= 1"));
        }
        Style::Tree => {
            let p: Vec<String> = (0..n as usize).map(|i| b.xor(&a[i], &bb[i])).collect();
            let g: Vec<String> = (0..n as usize)
                .map(|i| {
                    let na = b.not(&a[i]);
                    b.and(&na, &bb[i])
                })
                .collect();
            let mut q = vec![String::new()];
            q.extend((1..n as usize).map(|i| b.xnor(&a[i], &bb[i])));
            let br = lookahead(b, &g, &q);
            diffs.push(p[0].clone());
            for i in 1..n as usize {
                diffs.push(b.xor(&p[i], &br[i - 1]));
            }
            diffs.reverse();
            diffs.push(br[n as usize - 1].clone());
        }
    }
    diffs
}

fn select_literals(b: &mut Builder, sel: &[String], index: usize) -> Vec<String> {
    sel.iter()
        .enumerate()
        .map(|(j, s)| if index >> j & 1 == 1 { s.clone() } else { b.not(s) })
        .collect()
}

fn mux(b: &mut Builder, k: u32, style: Style) -> Vec<String> {
    let m = k.trailing_zeros();
    let d = lsb_first("d", k);
    let sel = lsb_first("sel", m);
    let y = match style {
        Style::Ripple => {
            let mut level = d;
            for s in &sel {
                let ns = b.not(s);
                level = level
                    .chunks(2)
                    .map(|pair| {
                        let lo = b.and(&pair[0], &ns);
                        let hi = b.and(&pair[1], s);
                        b.or(&lo, &hi)
                    })
                    .collect();
            }
            level.pop().expect("one survivor")
        }
        Style::Tree => {
            let terms: Vec<String> = (0..k as usize)
                .map(|i| {
                    let lits = select_literals(b, &sel, i);
                    let decoded = b.tree(&lits, Builder::and);
                    b.and(&decoded, &d[i])
                })
                .collect();
            b.tree(&terms, Builder::or)
        }
    };
    vec![y]
}

/// Recursive split decoder: both halves decoded separately, then combined
/// pairwise.
fn split_decode(b: &mut Builder, sel: &[String]) -> Vec<String> {
    if sel.len() == 1 {
        return vec![b.not(&sel[0]), sel[0].clone()];
    }
    let (lo, hi) = sel.split_at(sel.len() / 2);
    let lo = split_decode(b, lo);
    let hi = split_decode(b, hi);
    let mut out = Vec::with_capacity(lo.len() * hi.len());
    for h in &hi {
        for l in &lo {
            out.push(b.and(l, h));
        }
    }
    out
}

fn decoder(b: &mut Builder, n: u32, style: Style) -> Vec<String> {
    let sel = lsb_first("sel", n);
    let mut outs: Vec<String> = match style {
        Style::Ripple => (0..1usize << n)
            .map(|i| {
                let lits = select_literals(b, &sel, i);
                b.chain(&lits, Builder::and)
            })
            .collect(),
        Style::Tree => split_decode(b, &sel),
    };
    outs.reverse();
    outs
}

fn alu_parts(spec: &DesignSpec) -> Result<Vec<(String, Circuit)>, CorpusError> {
    let n = spec.width;
    let part = |family, width| {
        generate_design(&DesignSpec {
            family,
            width,
            variant: spec.variant,
            seed: spec.seed,
        })
    };
    let mut parts = vec![
        ("add".to_string(), part(Family::Adder, n)?),
        ("sub".to_string(), part(Family::Subtractor, n)?),
    ];
    // Single-gate bitwise arrays, lowered through the variant basis.
    for (name, kind) in [("andv", GateType::And), ("orv", GateType::Or)] {
        let mut b = Builder::new(spec.variant.basis, spec.seed);
        let outs = (0..n)
            .rev()
            .map(|i| {
                let (x, y) = (bit("a", i), bit("b", i));
                let net = if kind == GateType::And {
                    b.and(&x, &y)
                } else {
                    b.or(&x, &y)
                };
                (bit("y", i), net)
            })
            .collect();
        parts.push((
            name.to_string(),
            b.finish(name, [bus("a", n), bus("b", n)].concat(), outs)?,
        ));
    }
    for i in (0..n).rev() {
        parts.push((format!("mux{i}"), part(Family::Mux, 4)?));
    }
    Ok(parts)
}

/// Connection list for the ALU: `(s_m, s_0)` selects ADD, SUB, AND, OR as
/// mux data inputs 0..3.
pub fn alu_recipe(width: u32) -> StitchRecipe {
    let n = width;
    let (inputs, outputs) = ports(Family::Alu, n);
    let mut r = StitchRecipe::new(module_name(Family::Alu, n), inputs, outputs);
    for p in ["add", "sub", "andv", "orv"] {
        for i in 0..n {
            r.wire(&bit("a", i), &format!("{p}.{}", bit("a", i)));
            r.wire(&bit("b", i), &format!("{p}.{}", bit("b", i)));
        }
    }
    for i in 0..n {
        let m = format!("mux{i}");
        r.wire(&format!("add.{}", bit("sum", i)), &format!("{m}.d_0_"));
        r.wire(&format!("sub.{}", bit("diff", i)), &format!("{m}.d_1_"));
        r.wire(&format!("andv.{}", bit("y", i)), &format!("{m}.d_2_"));
        r.wire(&format!("orv.{}", bit("y", i)), &format!("{m}.d_3_"));
        r.wire("s_0", &format!("{m}.sel_0_"));
        r.wire("s_m", &format!("{m}.sel_1_"));
        r.wire(&format!("{m}.y"), &bit("y", i));
    }
    r
}

pub fn generate_design(spec: &DesignSpec) -> Result<Circuit, CorpusError> {
    spec.check()?;
    let (inputs, outputs) = ports(spec.family, spec.width);
    let name = module_name(spec.family, spec.width);
    if spec.family == Family::Alu {
        let parts = alu_parts(spec)?;
        return Ok(stitch_top(&parts, &alu_recipe(spec.width))?);
    }
    let mut b = Builder::new(spec.variant.basis, spec.build_seed());
    let style = spec.variant.style;
    let nets = match spec.family {
        Family::Adder => adder(&mut b, spec.width, style),
        Family::Subtractor => subtractor(&mut b, spec.width, style),
        Family::Mux => mux(&mut b, spec.width, style),
        Family::Decoder => decoder(&mut b, spec.width, style),
        Family::Alu => unreachable!(),
    };
    Ok(b.finish(&name, inputs, outputs.into_iter().zip(nets).collect())?)
}
