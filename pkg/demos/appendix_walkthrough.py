"""Rule out a genus-5 curve with 18 points over F_4 and show each elimination."""

from weilbounds.eliminate import analyze
from weilbounds.report import report_to_dict, to_text
from weilbounds.verify import verify_report
from weilbounds.weil import context

rep = analyze(context(4), 5, 18)
print(to_text(rep))
problems = verify_report(report_to_dict(rep), recount=True)
print("independent replay:", "ok" if not problems else problems)
