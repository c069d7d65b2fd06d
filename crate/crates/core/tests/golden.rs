use std::collections::BTreeSet;

use rough_afford::dsl::{evaluate, parse};
use rough_afford::format::{parse_phi, parse_sets, parse_sets_for_table, parse_table};
use rough_afford::oracle::NaiveModel;
use rough_afford::{AffordanceStructure, MembershipStatus, Sort};

macro_rules! sample {
    ($path:literal) => {
        include_str!(concat!(
            env!("CARGO_MANIFEST_DIR"),
            "/../../samples/",
            $path
        ))
    };
}

fn dunk() -> AffordanceStructure {
    parse_phi(
        sample!("dunk/phi.tsv"),
        parse_table(sample!("dunk/actors.tsv")).unwrap(),
        parse_table(sample!("dunk/objects.tsv")).unwrap(),
        parse_table(sample!("dunk/environments.tsv")).unwrap(),
    )
    .unwrap()
}

#[test]
fn tv_partition_and_statuses() {
    let t = parse_table(sample!("tv/tv.tsv")).unwrap();
    let blocks: Vec<Vec<&str>> = t
        .partition()
        .blocks()
        .iter()
        .map(|b| b.iter().map(|&x| t.objects()[x].as_str()).collect())
        .collect();
    assert_eq!(
        blocks,
        [vec!["1"], vec!["2"], vec!["3"], vec!["4", "5"], vec!["6"]]
    );

    let sets = parse_sets_for_table(sample!("tv/sets.tsv"), &t, Sort::A).unwrap();
    let x = &sets[0].1;
    let status = |id: &str| t.partition().membership_status(x, t.position(id).unwrap());
    assert_eq!(status("2"), MembershipStatus::CertainlyIn);
    assert_eq!(status("6"), MembershipStatus::CertainlyOut);
    assert_eq!(status("4"), MembershipStatus::Possibly);
    assert_eq!(status("5"), MembershipStatus::Possibly);
    assert_eq!(status("3"), MembershipStatus::CertainlyIn);
    assert_eq!(status("1"), MembershipStatus::CertainlyOut);
}

#[test]
fn actors_approximations() {
    let t = parse_table(sample!("actors/actors.tsv")).unwrap();
    let sets = parse_sets_for_table(sample!("actors/sets.tsv"), &t, Sort::A).unwrap();
    let x = &sets[0].1;
    let p = t.partition();
    assert_eq!(
        t.ids(&p.upper(x)),
        ["a1", "a3", "a4", "a5", "a7", "a8", "a9"]
    );
    // a5 and a9 share a row and both lie in X, so both are certain members.
    assert_eq!(t.ids(&p.lower(x)), ["a3", "a5", "a9"]);
    assert_eq!(t.ids(&p.boundary(x)), ["a1", "a4", "a7", "a8"]);
}

#[test]
fn actors_lower_matches_naive_definition() {
    let t = parse_table(sample!("actors/actors.tsv")).unwrap();
    let single = |name: &str| parse_table(&format!("#table {name}\nid\nz\n")).unwrap();
    let s = AffordanceStructure::new(t.clone(), single("o"), single("e"), [], None);
    let x = s.select(Sort::A, &["a1", "a3", "a4", "a5", "a9"]).unwrap();
    let xs: BTreeSet<usize> = x.iter().collect();
    let naive = NaiveModel::new(&s);
    assert_eq!(
        naive.lower_set(Sort::A, &xs),
        s.lower_set(&x).iter().collect()
    );
    assert_eq!(
        naive.upper_set(Sort::A, &xs),
        s.upper_set(&x).iter().collect()
    );
}

#[test]
fn playground_classes() {
    let t = parse_table(sample!("playgrounds/playgrounds.tsv")).unwrap();
    let p = t.partition();
    assert_eq!(p.block_count(), 8);
    assert!(p.same_block(t.position("e1").unwrap(), t.position("e9").unwrap()));
    assert!(p.same_block(t.position("e5").unwrap(), t.position("e10").unwrap()));
    let courts = &parse_sets_for_table(sample!("playgrounds/sets.tsv"), &t, Sort::A).unwrap()[0].1;
    assert!(p.is_saturated(courts));
}

#[test]
fn dunk_rough_affordance() {
    let s = dunk();
    assert_eq!(s.label(), Some("dunk"));
    assert_eq!(s.phi().len(), 40);
    let r = s.rough_affordance();
    assert_eq!(r.upper.len(), 60);
    assert_eq!(r.lower.len(), 20);
    assert!(r
        .upper
        .iter()
        .any(|t| s.triple_ids(t) == ["a10", "o1", "e1"]));
    assert!(r.lower.iter().all(|t| s.triple_ids(t)[0] == "a3"));
}

#[test]
fn dunk_queries() {
    let s = dunk();
    let sets = parse_sets(sample!("dunk/sets.tsv"), &s).unwrap();
    let run = |q: &str| evaluate(&parse(q).unwrap(), &s, &sets).unwrap().members(&s);
    let hoops = ["e1", "e2", "e3", "e4", "e9"];
    assert_eq!(run("poss[E](TallPros, Basketballs)"), hoops);
    assert!(run("suff[E](TallPros, Basketballs)").is_empty());
    assert_eq!(run("suff[E; upper](TallPros, Basketballs)"), hoops);
    assert_eq!(run("alpha_up[E](TallPros, Basketballs)"), hoops);
    assert!(run("alpha_low[E](TallPros, Basketballs)").is_empty());
    assert_eq!(run("suff[E](Empty, Balls)").len(), 10);
    assert_eq!(run("up(TallPros)@A \\ TallPros"), Vec::<String>::new());
    assert_eq!(
        run("poss[A; upper](Basketballs, Hoops)"),
        ["a3", "a6", "a10"]
    );
}

#[test]
fn koka_sample() {
    let s = parse_phi(
        sample!("koka/phi.tsv"),
        parse_table(sample!("koka/pets.tsv")).unwrap(),
        parse_table(sample!("koka/things.tsv")).unwrap(),
        parse_table(sample!("koka/parks.tsv")).unwrap(),
    )
    .unwrap();
    let sets = parse_sets(sample!("koka/sets.tsv"), &s).unwrap();
    let run = |q: &str| evaluate(&parse(q).unwrap(), &s, &sets).unwrap().members(&s);
    assert_eq!(run("alpha_low[E](Koka, Stick)"), ["park", "meadow"]);
    assert!(run("suff[E; lower](Koka, Stick)").is_empty());
    assert!(run("low(Koka)@A").is_empty());
}
