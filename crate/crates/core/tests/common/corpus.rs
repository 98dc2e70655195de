//! Curated derivations and single-line corruptions of them.

use veltman::Logic;

pub struct Case {
    pub name: &'static str,
    pub logic: Logic,
    pub text: String,
}

fn case(name: &'static str, logic: Logic, text: &str) -> Case {
    Case {
        name,
        logic,
        text: text.to_string(),
    }
}

const P_RHD_P: &str = "\
# p |> p from J1
1. p -> p ; taut
2. [](p -> p) ; nec 1
3. [](p -> p) -> p |> p ; ax J1
4. p |> p ; mp 2 3
";

const TOP_RHD_TOP: &str = "\
1. top -> top ; taut
2. [](top -> top) ; nec 1
3. [](top -> top) -> top |> top ; ax J1
4. top |> top ; mp 2 3
";

const K_STEP: &str = "\
1. p -> (q -> p) ; taut
2. [](p -> (q -> p)) ; nec 1
3. [](p -> (q -> p)) -> ([]p -> [](q -> p)) ; ax K
4. []p -> [](q -> p) ; mp 2 3
";

/// One instance of each registered schema, with the logic that has it.
pub const INSTANCES: &[(&str, Logic, &str)] = &[
    ("K", Logic::IL, "[](p & q -> []r) -> ([](p & q) -> [][]r)"),
    ("L", Logic::IL, "[]([](p & q) -> p & q) -> [](p & q)"),
    ("J1", Logic::IL, "[](p & q -> []r) -> p & q |> []r"),
    ("J2", Logic::IL, "(p & q |> []r) & ([]r |> ~s) -> p & q |> ~s"),
    ("J3", Logic::IL, "(p & q |> ~s) & ([]r |> ~s) -> (p & q) | []r |> ~s"),
    ("J4", Logic::IL, "p & q |> []r -> (<>(p & q) -> <>[]r)"),
    ("J5", Logic::IL, "<>(p & q) |> p & q"),
    ("M", Logic::ILM, "p & q |> []r -> (p & q) & []~s |> []r & []~s"),
    ("M0", Logic::ILM0, "p & q |> []r -> <>(p & q) & []~s |> []r & []~s"),
    ("P", Logic::ILP, "p & q |> []r -> [](p & q |> []r)"),
    ("P0", Logic::ILP0, "p & q |> <>[]r -> [](p & q |> []r)"),
    ("R", Logic::ILR, "p & q |> []r -> ~(p & q |> ~~s) |> []r & []~s"),
    ("W", Logic::ILW, "p & q |> []r -> p & q |> []r & []~(p & q)"),
];

pub fn accepted() -> Vec<Case> {
    let mut out = vec![
        case("p |> p", Logic::IL, P_RHD_P),
        case("top |> top", Logic::IL, TOP_RHD_TOP),
        case("K step", Logic::IL, K_STEP),
    ];
    for &(name, logic, f) in INSTANCES {
        out.push(case(name, logic, &format!("1. {f} ; ax {name}\n")));
    }
    // Extensions keep the base axioms.
    out.push(case("J5 in ILWstar", Logic::ILWstar, "1. <>p |> p ; ax J5\n"));
    out.push(case("W in ILWstar", Logic::ILWstar, "1. p |> q -> p |> q & []~p ; ax W\n"));
    out
}

pub fn mutations() -> Vec<Case> {
    let swap = |from: &str, to: &str| P_RHD_P.replacen(from, to, 1);
    let mut out = vec![
        Case { name: "mp premises swapped", logic: Logic::IL, text: swap("mp 2 3", "mp 3 2") },
        Case { name: "mp forward reference", logic: Logic::IL, text: swap("mp 2 3", "mp 2 5") },
        Case { name: "mp self reference", logic: Logic::IL, text: swap("mp 2 3", "mp 4 3") },
        Case { name: "nec of wrong line", logic: Logic::IL, text: swap("nec 1", "nec 2") },
        Case { name: "nec line zero", logic: Logic::IL, text: swap("nec 1", "nec 0") },
        Case { name: "non-tautology", logic: Logic::IL, text: P_RHD_P.replace("1. p -> p", "1. p -> q").replace("[](p -> p) ; nec", "[](p -> q) ; nec") },
        Case { name: "wrong schema name", logic: Logic::IL, text: swap("ax J1", "ax J2") },
        Case { name: "schema outside the logic", logic: Logic::IL, text: swap("ax J1", "ax M") },
        Case { name: "wrong conclusion", logic: Logic::IL, text: swap("4. p |> p", "4. p |> q") },
        Case { name: "necessitated wrong formula", logic: Logic::IL, text: swap("2. [](p -> p)", "2. <>(p -> p)") },
        Case { name: "axiom line altered", logic: Logic::IL, text: swap("3. [](p -> p) -> p |> p", "3. [](p -> p) -> p |> ~p") },
        Case { name: "modal formula as tautology", logic: Logic::IL, text: swap("1. p -> p ; taut", "1. p |> p ; taut") },
        Case { name: "nec as mp", logic: Logic::IL, text: swap("nec 1", "mp 1 1") },
        Case { name: "top proof altered", logic: Logic::IL, text: TOP_RHD_TOP.replacen("4. top |> top", "4. top |> bot", 1) },
        Case { name: "K step altered", logic: Logic::IL, text: K_STEP.replacen("4. []p -> [](q -> p)", "4. []q -> [](q -> p)", 1) },
        Case { name: "K as L", logic: Logic::IL, text: K_STEP.replacen("ax K", "ax L", 1) },
    ];
    // Each instance under another schema's name, and in a logic lacking it.
    for (i, &(name, logic, f)) in INSTANCES.iter().enumerate() {
        let (other, ..) = INSTANCES[(i + 1) % INSTANCES.len()];
        out.push(Case { name: "instance misnamed", logic, text: format!("1. {f} ; ax {other}\n") });
        if logic != Logic::IL {
            out.push(Case { name: "extension axiom in IL", logic: Logic::IL, text: format!("1. {f} ; ax {name}\n") });
        }
    }
    out.push(Case { name: "W* is not an axiom of ILWstar", logic: Logic::ILWstar, text: "1. p |> q -> q & []r |> q & []r & []~p ; ax Wstar\n".into() });
    out.push(Case { name: "M in ILW", logic: Logic::ILW, text: "1. p |> q -> p & []r |> q & []r ; ax M\n".into() });
    out.push(Case { name: "J2 with broken middle", logic: Logic::IL, text: "1. (p |> q) & (r |> s) -> p |> s ; ax J2\n".into() });
    out
}
