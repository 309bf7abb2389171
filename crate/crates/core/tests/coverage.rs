use multivalent::coverage::{untouched, Op};
use multivalent::harness::{all_checks, run_campaign, CampaignConfig};

#[test]
fn default_campaign_touches_every_operation() {
    let reports = run_campaign(&CampaignConfig::default(), &all_checks()).unwrap();
    assert_eq!(reports.len(), all_checks().len());
    let missing: Vec<&str> = untouched().into_iter().map(Op::name).collect();
    assert!(missing.is_empty(), "operations never exercised: {missing:?}");
}
