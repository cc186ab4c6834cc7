use qcorr::reproduce::*;

fn run(id: TableId) -> ReproTable {
    reproduce(id, &ReproOptions::default()).unwrap()
}

fn failing(t: &ReproTable) -> Vec<String> {
    t.failures().iter().map(|r| format!("{} {}", r.label, r.quantity)).collect()
}

#[test]
fn table_ids_round_trip() {
    for id in TableId::ALL {
        assert_eq!(id.name().parse::<TableId>().unwrap(), id);
        assert_eq!(id.to_string(), id.name());
    }
    assert_eq!("NEGTAB".parse::<TableId>().unwrap(), TableId::NegTab);
    assert!("table-9".parse::<TableId>().is_err());
    assert_eq!(serde_json::to_string(&TableId::ResultTable1).unwrap(), "\"result-table-1\"");
    assert_eq!(serde_json::from_str::<TableId>("\"negTab\"").unwrap(), TableId::NegTab);
}

#[test]
fn exact_tables_pass() {
    for id in [TableId::NegTab, TableId::ResultTable, TableId::ResultTable1, TableId::MvDynamics, TableId::NpaVerdicts] {
        let t = run(id);
        assert!(t.all_pass(), "{id}: {:?}", failing(&t));
        assert!(!t.rows.is_empty());
    }
}

#[test]
fn negativity_rows_cover_every_catalog_state() {
    let t = run(TableId::NegTab);
    assert_eq!(t.rows.len(), 20);
    assert_eq!(neg_tab_states().len(), 20);
    assert!(t.rows.iter().all(|r| r.delta.unwrap() <= 5e-4));
}

#[test]
fn bound_entanglement_table_has_one_known_mismatch() {
    let t = run(TableId::TableCh5);
    assert_eq!(t.rows.len(), TABLE_CH5.len());
    assert_eq!(failing(&t), ["b=0.08 inequality"]);
    let row = &t.rows[1];
    assert!((row.computed - 1.8677).abs() < 1e-4);
}

#[test]
fn fraction_table_reports_its_gaps() {
    let t = run(TableId::FigFractions);
    assert_eq!(t.rows.len(), 8);
    assert_eq!(
        failing(&t),
        ["2 ops best-subset", "3 ops best-subset", "3 ops worst-valid-subset"]
    );
}

#[test]
fn npa_rows_are_verdicts() {
    let t = run(TableId::NpaVerdicts);
    assert_eq!(t.rows.len(), 4);
    assert!(t.rows.iter().all(|r| r.expected.is_some() && r.expected == r.observed));
}

#[test]
fn closed_form_map_value() {
    assert!((mv_closed_form(0.0) + 0.067862).abs() < 1e-6);
    let root = 2.0 - 8.0 * qcorr::witnesses::ncc_c_opt().c_opt;
    assert!(mv_closed_form(root).abs() < 1e-15);
}

#[test]
fn rows_serialize_to_json() {
    let t = run(TableId::TableCh5);
    let v: serde_json::Value = serde_json::to_value(&t).unwrap();
    assert_eq!(v["id"], "table-ch5");
    assert_eq!(v["rows"].as_array().unwrap().len(), 5);
}
