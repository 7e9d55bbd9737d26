#!/usr/bin/env python3
# SPDX-License-Identifier: Apache-2.0
"""Generates the bundled fixture corpus, the gold set, and the frozen expected
rankings the tests compare against.

    python3 tools/make_fixtures.py            # rewrite the files
    python3 tools/make_fixtures.py --check    # fail if the files are stale

Each of the 25 queries gets a corpus of at most ten result pages: one planted
solution (closest trace and code, top votes, in every engine's top ten) and a
varied set of decoys. Expected rankings come from scoring_oracle.py.
"""

import argparse
import html
import json
import random
import re
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent))
import scoring_oracle as oracle  # noqa: E402

ROOT = Path(__file__).resolve().parent.parent
FIXTURES = ROOT / "data" / "fixtures" / "fixtures.json"
GOLD = ROOT / "data" / "fixtures" / "gold.json"
EXPECTED = ROOT / "tests" / "data" / "expected_ranks.json"

SEED = 20130514
ENGINES = ("google", "bing", "yahoo")
EVAL_CONFIGS = ["cnt", "cnt,cxt", "cnt,pop", "cnt,ser", "cnt,cxt,pop", "cnt,cxt,ser", "cnt,cxt,pop,ser"]

ORGS = ["acme", "globex", "initech", "umbrella", "hooli", "vandelay", "stark", "wayne", "tyrell", "cyberdyne"]
APPS = ["billing", "inventory", "shop", "reports", "gateway", "scheduler", "catalog", "ledger", "crm", "editor"]
NOUNS = ["Order", "Invoice", "Customer", "Ticket", "Session", "Product", "Account", "Shipment", "Report", "Task"]
SO_TRAFFIC = 48
DOCS_TRAFFIC = 310


# -- scenarios ----------------------------------------------------------------
#
# A scenario fixes the exception, the library frames beneath user code, the
# shape of the offending snippet and the wording of related page titles.
# `{N}` is a domain noun, `{n}` its lower-case form, `{S}` a service class.

SCENARIOS = {
    "cme_list": dict(
        etype="java.util.ConcurrentModificationException", message=None,
        lib=[("java.util.ArrayList$Itr", "checkForComodification", ("ArrayList.java", 1013)),
             ("java.util.ArrayList$Itr", "next", ("ArrayList.java", 967))],
        code=["List<{N}> {n}s = {s}.load{N}s();",
              "for ({N} {n} : {n}s) {{",
              "    if ({n}.isExpired()) {{",
              "        {n}s.remove({n});",
              "    }}",
              "}}",
              "{s}.saveAll({n}s);"],
        fix=["Iterator<{N}> it = {n}s.iterator();", "while (it.hasNext()) {{",
             "    if (it.next().isExpired()) {{", "        it.remove();", "    }}", "}}"],
        solution="ConcurrentModificationException when removing from an ArrayList inside a for-each loop",
        twin="Why does my code throw java.util.ConcurrentModificationException?",
        doc="docs.oracle.com/javase/8/docs/api/java/util/ConcurrentModificationException.html",
        doc_title="ConcurrentModificationException (Java Platform SE 8)",
        blog="Avoiding ConcurrentModificationException in Java collections"),
    "cme_map": dict(
        etype="java.util.ConcurrentModificationException", message=None,
        query="ConcurrentModificationException iterating HashMap keySet",
        lib=[("java.util.HashMap$HashIterator", "nextNode", ("HashMap.java", 1445)),
             ("java.util.HashMap$KeyIterator", "next", ("HashMap.java", 1469))],
        code=["Map<String, {N}> cache = {s}.snapshot();",
              "for (String key : cache.keySet()) {{",
              "    {N} {n} = cache.get(key);",
              "    if ({n}.isStale()) {{",
              "        cache.remove(key);",
              "    }}",
              "}}"],
        fix=["cache.entrySet().removeIf(e -> e.getValue().isStale());"],
        solution="Removing entries from a HashMap while iterating over keySet throws ConcurrentModificationException",
        twin="ConcurrentModificationException iterating HashMap",
        doc="docs.oracle.com/javase/8/docs/api/java/util/HashMap.html",
        doc_title="HashMap (Java Platform SE 8)",
        blog="HashMap iteration and safe removal"),
    "npe": dict(
        etype="java.lang.NullPointerException",
        message='Cannot invoke "String.trim()" because the return value of "{pkg}.{N}.getName()" is null',
        lib=[],
        code=["{N} {n} = {s}.find{N}(id);",
              "if ({n} == null) {{",
              "    log.warn(\"missing {n} {{}}\", id);",
              "}}",
              "String label = {n}.getName().trim();",
              "view.setLabel(label);",
              "return label;"],
        fix=["String name = {n}.getName();", "String label = name == null ? \"\" : name.trim();"],
        solution="NullPointerException calling trim() on a getter that returns null",
        twin="What is a NullPointerException, and how do I fix it?",
        doc="docs.oracle.com/javase/8/docs/api/java/lang/NullPointerException.html",
        doc_title="NullPointerException (Java Platform SE 8)",
        blog="Helpful NullPointerException messages explained"),
    "cce": dict(
        etype="java.lang.ClassCastException",
        message="class java.lang.Integer cannot be cast to class java.lang.String",
        lib=[],
        code=["Map<String, Object> attrs = {n}.getAttributes();",
              "Object raw = attrs.get(\"quantity\");",
              "// quantity used to be stored as text",
              "String quantity = (String) raw;",
              "int count = Integer.parseInt(quantity);",
              "{s}.reserve({n}, count);",
              "return count;"],
        fix=["String quantity = String.valueOf(raw);"],
        solution="ClassCastException: Integer cannot be cast to String when reading a map value",
        twin="java.lang.ClassCastException: class java.lang.Integer cannot be cast to class java.lang.String",
        doc="docs.oracle.com/javase/8/docs/api/java/lang/ClassCastException.html",
        doc_title="ClassCastException (Java Platform SE 8)",
        blog="Understanding ClassCastException with generics"),
    "aioobe": dict(
        etype="java.lang.ArrayIndexOutOfBoundsException",
        message="Index {k} out of bounds for length {k}",
        lib=[],
        code=["{N}[] {n}s = {s}.page(offset);",
              "double total = 0;",
              "for (int i = 0; i <= {n}s.length; i++) {{",
              "    total += {n}s[i].amount();",
              "}}",
              "report.add(total);",
              "return total;"],
        fix=["for (int i = 0; i < {n}s.length; i++) {{"],
        solution="ArrayIndexOutOfBoundsException at the end of a for loop over an array",
        twin="java.lang.ArrayIndexOutOfBoundsException: Index {k} out of bounds for length {k}",
        doc="docs.oracle.com/javase/8/docs/api/java/lang/ArrayIndexOutOfBoundsException.html",
        doc_title="ArrayIndexOutOfBoundsException (Java Platform SE 8)",
        blog="Off-by-one errors in Java loops"),
    "nfe": dict(
        etype="java.lang.NumberFormatException", message='For input string: "{word}"',
        lib=[("java.lang.NumberFormatException", "forInputString", ("NumberFormatException.java", 65)),
             ("java.lang.Integer", "parseInt", ("Integer.java", 580)),
             ("java.lang.Integer", "parseInt", ("Integer.java", 615))],
        code=["String[] parts = line.split(\",\");",
              "String sku = parts[0];",
              "String qty = parts[1];",
              "int amount = Integer.parseInt(qty);",
              "{N} {n} = new {N}(sku, amount);",
              "{s}.add({n});",
              "count++;"],
        fix=["int amount = Integer.parseInt(qty.trim());"],
        solution="NumberFormatException: For input string when parsing CSV columns with Integer.parseInt",
        twin='java.lang.NumberFormatException: For input string: "{word}"',
        doc="docs.oracle.com/javase/8/docs/api/java/lang/Integer.html",
        doc_title="Integer (Java Platform SE 8)",
        blog="Parsing numbers safely in Java"),
    "swt": dict(
        etype="org.eclipse.swt.SWTException", message="Widget is disposed",
        lib=[("org.eclipse.swt.SWT", "error", ("SWT.java", 4533)),
             ("org.eclipse.swt.SWT", "error", ("SWT.java", 4448)),
             ("org.eclipse.swt.widgets.Widget", "error", ("Widget.java", 482)),
             ("org.eclipse.swt.widgets.Widget", "checkWidget", ("Widget.java", 419)),
             ("org.eclipse.swt.widgets.Label", "setText", ("Label.java", 393))],
        code=["Display.getDefault().asyncExec(() -> {{",
              "    {N} {n} = {s}.current();",
              "    statusLabel.setText({n}.describe());",
              "    statusLabel.getParent().layout();",
              "}});",
              "shell.close();",
              "{s}.stop();"],
        fix=["if (!statusLabel.isDisposed()) {{", "    statusLabel.setText({n}.describe());", "}}"],
        solution="SWTException Widget is disposed when updating a Label from asyncExec",
        twin="org.eclipse.swt.SWTException: Widget is disposed",
        doc="help.eclipse.org/latest/topic/org.eclipse.platform.doc.isv/reference/api/org/eclipse/swt/SWTException.html",
        doc_title="SWTException (Eclipse Platform API Specification)",
        blog="SWT threading rules and disposed widgets"),
    "uoe": dict(
        etype="java.lang.UnsupportedOperationException", message=None,
        query="UnsupportedOperationException when adding to list from Arrays.asList",
        lib=[("java.util.AbstractList", "add", ("AbstractList.java", 148)),
             ("java.util.AbstractList", "add", ("AbstractList.java", 108))],
        code=["List<String> tags = Arrays.asList(\"new\", \"open\");",
              "if ({n}.isUrgent()) {{",
              "    tags.add(\"urgent\");",
              "}}",
              "{n}.setTags(tags);",
              "{s}.update({n});",
              "return tags;"],
        fix=["List<String> tags = new ArrayList<>(Arrays.asList(\"new\", \"open\"));"],
        solution="Why does Arrays.asList().add() throw UnsupportedOperationException?",
        twin="UnsupportedOperationException when adding to a List",
        doc="docs.oracle.com/javase/8/docs/api/java/util/Arrays.html",
        doc_title="Arrays (Java Platform SE 8)",
        blog="Fixed-size lists from Arrays.asList"),
    "timsort": dict(
        etype="java.lang.IllegalArgumentException", message="Comparison method violates its general contract!",
        lib=[("java.util.TimSort", "mergeHi", ("TimSort.java", 899)),
             ("java.util.TimSort", "mergeAt", ("TimSort.java", 516)),
             ("java.util.TimSort", "mergeCollapse", ("TimSort.java", 441)),
             ("java.util.TimSort", "sort", ("TimSort.java", 245)),
             ("java.util.Arrays", "sort", ("Arrays.java", 1512)),
             ("java.util.ArrayList", "sort", ("ArrayList.java", 1462))],
        code=["{n}s.sort((a, b) -> {{",
              "    if (a.priority() < b.priority()) return -1;",
              "    if (a.priority() > b.priority()) return 1;",
              "    return a.isPinned() ? -1 : 1;",
              "}});",
              "{s}.publish({n}s);",
              "return {n}s;"],
        fix=["{n}s.sort(Comparator.comparingInt({N}::priority)", "        .thenComparing({N}::isPinned, Comparator.reverseOrder()));"],
        solution="\"Comparison method violates its general contract!\" with a custom Comparator",
        twin="java.lang.IllegalArgumentException: Comparison method violates its general contract!",
        doc="docs.oracle.com/javase/8/docs/api/java/util/Comparator.html",
        doc_title="Comparator (Java Platform SE 8)",
        blog="Writing consistent comparators"),
    "sql": dict(
        etype="java.sql.SQLException", message="No suitable driver found for jdbc:mysql://localhost:3306/{app}",
        lib=[("java.sql.DriverManager", "getConnection", ("DriverManager.java", 689)),
             ("java.sql.DriverManager", "getConnection", ("DriverManager.java", 247))],
        code=["String url = \"jdbc:mysql://localhost:3306/{app}\";",
              "Properties props = new Properties();",
              "props.setProperty(\"user\", config.user());",
              "Connection conn = DriverManager.getConnection(url, props);",
              "{s}.attach(conn);",
              "conn.setAutoCommit(false);",
              "return conn;"],
        fix=["Class.forName(\"com.mysql.cj.jdbc.Driver\");"],
        solution="SQLException: No suitable driver found for jdbc:mysql when opening a connection",
        twin="java.sql.SQLException: No suitable driver found",
        doc="docs.oracle.com/javase/8/docs/api/java/sql/DriverManager.html",
        doc_title="DriverManager (Java Platform SE 8)",
        blog="Loading JDBC drivers on the classpath"),
    "fnf": dict(
        etype="java.io.FileNotFoundException", message="{app}.properties (No such file or directory)",
        lib=[("java.io.FileInputStream", "open0", "Native Method"),
             ("java.io.FileInputStream", "open", ("FileInputStream.java", 195)),
             ("java.io.FileInputStream", "<init>", ("FileInputStream.java", 138))],
        code=["Properties props = new Properties();",
              "File file = new File(\"{app}.properties\");",
              "try (InputStream in = new FileInputStream(file)) {{",
              "    props.load(in);",
              "}}",
              "{s}.configure(props);",
              "return props;"],
        fix=["try (InputStream in = getClass().getResourceAsStream(\"/{app}.properties\")) {{"],
        solution="FileNotFoundException reading a properties file that is on the classpath",
        twin="java.io.FileNotFoundException: (No such file or directory)",
        doc="docs.oracle.com/javase/8/docs/api/java/io/FileInputStream.html",
        doc_title="FileInputStream (Java Platform SE 8)",
        blog="Loading resources versus files in Java"),
    "cnfe": dict(
        etype="java.lang.RuntimeException", message="Failed to load plugin {pkg}.{N}Plugin",
        cause=("java.lang.ClassNotFoundException", "{pkg}.{N}Plugin",
               [("java.net.URLClassLoader", "findClass", ("URLClassLoader.java", 382)),
                ("java.lang.ClassLoader", "loadClass", ("ClassLoader.java", 418)),
                ("java.lang.Class", "forName0", "Native Method"),
                ("java.lang.Class", "forName", ("Class.java", 315))]),
        lib=[],
        code=["String name = registry.get(\"{n}\");",
              "try {{",
              "    Class<?> type = Class.forName(name);",
              "    plugins.add((Plugin) type.getDeclaredConstructor().newInstance());",
              "}} catch (ReflectiveOperationException e) {{",
              "    throw new RuntimeException(\"Failed to load plugin \" + name, e);",
              "}}"],
        fix=["Class<?> type = Class.forName(name, true, pluginLoader);"],
        solution="ClassNotFoundException for a plugin class loaded with Class.forName",
        twin="java.lang.RuntimeException: Failed to load plugin",
        doc="docs.oracle.com/javase/8/docs/api/java/lang/ClassNotFoundException.html",
        doc_title="ClassNotFoundException (Java Platform SE 8)",
        blog="Class loaders and plugin architectures"),
}

# Other ways a developer might phrase the search, so repeated scenarios get
# distinct query texts.
ALTERNATIVES = {
    "cme_list": ["ConcurrentModificationException ArrayList remove in loop"],
    "cce": ["ClassCastException Integer cannot be cast to String"],
    "swt": ["SWTException: Widget is disposed"],
    "timsort": ["Comparison method violates its general contract"],
    "uoe": ["java.lang.UnsupportedOperationException at java.util.AbstractList.add"],
}

# 25 queries; a scenario may appear more than once with different user code.
PLAN = ["cme_list", "npe", "cce", "aioobe", "nfe", "swt", "uoe", "timsort", "sql", "fnf", "cnfe", "cme_map",
        "npe", "nfe", "aioobe", "swt", "cce", "sql", "fnf", "timsort", "cme_list", "cnfe", "uoe", "npe", "nfe"]
WORDS = ["12a", "abc", "", " 42", "1,000", "0x1F", "NaN", "seven"]


class Ctx(dict):
    def fmt(self, s):
        return s.format(**self)


def slug(title):
    return re.sub(r"[^a-z0-9]+", "-", title.lower()).strip("-")[:80]


def canonical(url):
    """Canonical form of the URLs this script generates."""
    m = re.match(r"^(https?)://([^/?#]+)([^?#]*)(\?[^#]*)?(#.*)?$", url)
    assert m, url
    host, path, query = m.group(2).lower(), m.group(3), m.group(4) or ""
    params = sorted(p for p in query[1:].split("&") if p and not p.startswith("utm_")) if query else []
    path = path.rstrip("/")
    out = host + path
    if params:
        out += "?" + "&".join(params)
    return out if path or params else host + "/"


def make_trace(rng, ctx, sc, user_pkg, user_cls, methods, prefix_thread=False):
    frames = list(sc["lib"])
    line = rng.randint(20, 240)
    for m in methods:
        frames.append((f"{user_pkg}.{user_cls}", m, (f"{user_cls}.java", line)))
        line = rng.randint(20, 240)
    frames.append((f"{user_pkg}.Main", "main", ("Main.java", rng.randint(8, 40))))
    message = ctx.fmt(sc["message"]) if sc["message"] is not None else None
    trace = [(sc["etype"], message, frames)]
    if "cause" in sc:
        ctype, cmsg, cframes = sc["cause"]
        trace.append((ctype, ctx.fmt(cmsg), list(cframes)))
    return trace


def raw_trace(trace, thread=False, more=0):
    text = oracle.render_trace(trace, line_numbers=True)
    if thread:
        text = 'Exception in thread "main" ' + text
    if more and len(trace) > 1:
        text += f"\n\t... {more} more"
    return text


def page_html(title, blocks, links):
    """blocks: ("p", text) | ("pre", text) | ("ptrace", text) for a trace pasted into prose."""
    out = ["<!DOCTYPE html>", "<html><head><meta charset=\"utf-8\">",
           f"<title>{html.escape(title)}</title>", "<style>pre{background:#eee}</style></head>",
           "<body>", f"<h1>{html.escape(title)}</h1>"]
    for kind, text in blocks:
        if kind == "p":
            out.append(f"<p>{html.escape(text)}</p>")
        elif kind == "pre":
            out.append(f"<pre><code>{html.escape(text)}</code></pre>")
        elif kind == "ptrace":
            out.append("<p>" + "<br>".join(html.escape(l) for l in text.split("\n")) + "</p>")
    if links:
        out.append("<ul>")
        for href, label in links:
            out.append(f"<li><a href=\"{html.escape(href)}\">{html.escape(label)}</a></li>")
        out.append("</ul>")
    out.append("</body></html>")
    return "\n".join(out)


class Query:
    def __init__(self, qid, rng, scenario_key):
        self.qid = qid
        self.rng = rng
        self.sc = sc = SCENARIOS[scenario_key]
        org, app = rng.choice(ORGS), rng.choice(APPS)
        noun = rng.choice(NOUNS)
        self.ctx = Ctx(N=noun, n=noun[0].lower() + noun[1:], s=noun[0].lower() + noun[1:] + "Service",
                       app=app, pkg=f"com.{org}.{app}", k=rng.randint(3, 12), word=rng.choice(WORDS))
        self.pages = {}     # canonical url -> html
        self.results = {p: [] for p in ENGINES + ("stackoverflow",)}
        self.entries = []   # oracle entries

    def add(self, url, title, positions, blocks, links=(), votes=None, traffic=None, traces=(),
            variants=None, snippet=None, html_page=True):
        canon = canonical(url)
        positions = dict(positions)
        for provider, pos in positions.items():
            taken = {r["position"] for r in self.results[provider]}
            while pos in taken:
                pos += 1
            positions[provider] = pos
            item = {"url": (variants or {}).get(provider, url), "title": title, "position": pos}
            if snippet:
                item["snippet"] = snippet
            if votes is not None:
                item["so_votes"] = votes
            if traffic is not None:
                item["traffic_rank"] = traffic
            self.results[provider].append(item)
        code_blocks = [text for kind, text in blocks if kind == "pre"]
        if html_page:
            self.pages[url] = page_html(title, blocks, list(links))
        self.entries.append(dict(
            url=canon, title=title, positions=positions, so_votes=votes, traffic_rank=traffic,
            code_blocks=code_blocks if html_page else [], traces=list(traces) if html_page else [],
            outlinks={canonical(h) for h, _ in links if canonical(h) != canon} if html_page else set()))
        return canon


def rename(lines, rng, ctx):
    """The asker's version of the snippet: same shape, different identifiers."""
    other = rng.choice([n for n in NOUNS if n != ctx["N"]])
    sub = Ctx(ctx, N=other, n=other[0].lower() + other[1:], s=other[0].lower() + other[1:] + "Repo")
    return [sub.fmt(l) for l in lines]


def build_query(qid, scenario_key, rng, so_ids):
    q = Query(qid, rng, scenario_key)
    sc, ctx = q.sc, q.ctx
    user_cls = ctx["N"] + rng.choice(["Service", "Manager", "Controller", "Job", "Handler"])
    methods = [rng.choice(["process", "refresh", "handle", "sync", "apply"]) + ctx["N"] + "s",
               rng.choice(["run", "execute", "dispatch"])]
    trace = make_trace(rng, ctx, sc, ctx["pkg"], user_cls, methods)
    context_lines = [ctx.fmt(l) for l in sc["code"]]
    phrasings = [sc.get("query") or oracle.render_trace(trace).split("\n")[0]] + ALTERNATIVES.get(scenario_key, [])
    message = ctx.fmt(rng.choice(phrasings))
    query = {"message": message, "trace": trace, "code_context": "\n".join(context_lines),
             "raw_trace": raw_trace(trace, thread=rng.random() < 0.4, more=2 if len(trace) > 1 else 0)}

    # Planted solution: same library frames and method names, the asker's own package and line numbers.
    so_id = so_ids.pop()
    sol_title = ctx.fmt(sc["solution"])
    sol_url = f"https://stackoverflow.com/questions/{so_id}/{slug(sol_title)}"
    asker_pkg = f"org.{rng.choice(ORGS)}.{rng.choice(APPS)}"
    sol_trace = make_trace(rng, ctx, sc, asker_pkg, user_cls, methods)
    asker_code = rename(sc["code"], rng, ctx)
    keep = rng.sample(range(7), 4)
    sol_code = [context_lines[i] if i in keep else asker_code[i] for i in range(7)]

    docs_url = "https://" + ctx.fmt(sc["doc"])
    twin_id = so_ids.pop()
    twin_title = ctx.fmt(sc["twin"])
    twin_url = f"https://stackoverflow.com/questions/{twin_id}/{slug(twin_title)}"
    blog_title = ctx.fmt(sc["blog"])
    blog_host = rng.choice(["www.baeldung.com", "dzone.com", "www.javacodegeeks.com", "mkyong.com"])
    blog_url = f"https://{blog_host}/{slug(blog_title)}/"

    def pos(lo, hi):
        return rng.randint(lo, hi)

    sol_positions = {"stackoverflow": pos(1, 4)}
    for e in ENGINES:
        sol_positions[e] = pos(2, 9)
    sol_votes = rng.randint(180, 2400)
    q.add(sol_url, sol_title, sol_positions,
          [("p", f"I keep getting this exception in my {ctx['app']} module:"),
           ("pre", raw_trace(sol_trace, more=3 if len(sol_trace) > 1 else 0)),
           ("p", "The code that triggers it:"),
           ("pre", "\n".join(sol_code)),
           ("p", "Answer: change the loop as follows."),
           ("pre", "\n".join(ctx.fmt(l) for l in sc["fix"]))],
          links=[(docs_url, "API documentation"), (twin_url, "Related question"),
                 (sol_url + "#answer", "permalink")],
          votes=sol_votes, traffic=SO_TRAFFIC, traces=[sol_trace])

    # Decoy: title nearly equal to the message, an unrelated trace of the same type.
    other_key = rng.choice([k for k in SCENARIOS if k != scenario_key and SCENARIOS[k]["etype"] != sc["etype"]])
    osc = SCENARIOS[other_key]
    twin_trace = [(sc["etype"], ctx.fmt(sc["message"]) if sc["message"] else None,
                   list(osc["lib"]) + [(f"net.{rng.choice(ORGS)}.demo.App", "main", ("App.java", pos(5, 60)))])]
    q.add(twin_url, twin_title, {"google": pos(1, 3), "stackoverflow": pos(2, 6)},
          [("p", "Here is what I see:"), ("pre", raw_trace(twin_trace)),
           ("pre", "\n".join(Ctx(ctx).fmt(l) for l in osc["code"]))],
          links=[(docs_url, "docs")], votes=rng.randint(0, sol_votes - 1), traffic=SO_TRAFFIC,
          traces=[twin_trace])

    # API documentation: heavily linked, no code context.
    q.add(docs_url, ctx.fmt(sc["doc_title"]), {"google": pos(1, 5), "bing": pos(1, 5)},
          [("p", f"Thrown to indicate a problem of type {sc['etype']}.")],
          links=[("https://docs.oracle.com/javase/8/docs/api/overview-summary.html", "Overview")],
          traffic=DOCS_TRAFFIC)

    # Tutorial blog, returned by two engines under URL variants.
    generic = rename(sc["fix"], rng, ctx)
    q.add(blog_url, blog_title, {"bing": pos(1, 8), "yahoo": pos(1, 8)},
          [("p", "In this tutorial we look at a common runtime error."), ("pre", "\n".join(generic))],
          links=[(docs_url, "Javadoc"), (sol_url, "Stack Overflow discussion")],
          traffic=rng.randint(900, 40000),
          variants={"bing": blog_url.replace("https://", "http://") + "?utm_source=bing&utm_medium=organic"})

    optional = ["forum", "github", "other_so", "deep", "snippet_only", "mailing"]
    for kind in rng.sample(optional, rng.randint(2, 6)):
        if kind == "forum":
            ftrace = make_trace(rng, ctx, osc, f"de.{rng.choice(ORGS)}.tool", "Worker", ["tick"])
            ftrace = [(sc["etype"],) + ftrace[0][1:]] + ftrace[1:]
            furl = f"https://www.coderanch.com/t/{rng.randint(100000, 999999)}/java/{slug(ctx.fmt(sc['twin']))[:40]}"
            q.add(furl, "Strange " + sc["etype"].rsplit(".", 1)[1] + " in worker thread (Java in General forum)",
                  {"yahoo": pos(2, 10), "google": pos(6, 10)},
                  [("p", "Our worker thread dies with this:"), ("ptrace", raw_trace(ftrace))],
                  links=[(docs_url, "docs"), (blog_url, "tutorial")], traffic=rng.randint(20000, 90000),
                  traces=[ftrace])
        elif kind == "github":
            gtrace = make_trace(rng, ctx, osc, f"io.{rng.choice(APPS)}.core", "Engine", ["start", "boot"])
            gtrace = [(sc["etype"], gtrace[0][1], gtrace[0][2])]
            gurl = f"https://github.com/{rng.choice(ORGS)}/{rng.choice(APPS)}/issues/{rng.randint(10, 4000)}"
            q.add(gurl, sc["etype"].rsplit(".", 1)[1] + " on startup · Issue", {"bing": pos(3, 10)},
                  [("p", "Steps to reproduce: start the server."), ("pre", raw_trace(gtrace))],
                  links=[(sol_url, "see also")], traffic=rng.randint(60, 120), traces=[gtrace])
        elif kind == "other_so":
            o2 = SCENARIOS[rng.choice([k for k in SCENARIOS if k != scenario_key])]
            t = ctx.fmt(o2["solution"])
            ourl = f"https://stackoverflow.com/questions/{so_ids.pop()}/{slug(t)}"
            q.add(ourl, t, {"stackoverflow": pos(5, 10), "yahoo": pos(4, 10)},
                  [("p", "Question body."), ("pre", "\n".join(ctx.fmt(l) for l in o2["code"]))],
                  links=[(twin_url, "linked")], votes=rng.randint(sol_votes // 3, sol_votes - 1),
                  traffic=SO_TRAFFIC)
        elif kind == "deep":
            durl = f"https://www.programcreek.com/java-api-examples/?api={sc['etype']}&page={rng.randint(2, 60)}"
            q.add(durl, "Java Code Examples for " + sc["etype"], {"google": pos(11, 15), "bing": pos(12, 15)},
                  [("pre", "\n".join(rename(sc["code"][:3], rng, ctx)))], traffic=rng.randint(5000, 20000))
        elif kind == "snippet_only":
            surl = f"https://www.reddit.com/r/javahelp/comments/{rng.randint(10**5, 10**6)}/help_with_exception/"
            q.add(surl, "Help with " + sc["etype"].rsplit(".", 1)[1] + "?", {"google": pos(7, 12)},
                  [], snippet="Beginner here, my program crashes and I do not understand the error.",
                  traffic=rng.randint(15, 40), html_page=False)
        elif kind == "mailing":
            murl = f"https://mail-archives.apache.org/mod_mbox/{rng.choice(APPS)}-user/{rng.randint(201001, 201312)}.mbox/"
            q.add(murl, "Re: " + message[:60], {"yahoo": pos(1, 10)},
                  [("p", "Did you check the classpath?")], links=[(blog_url, "blog")],
                  traffic=rng.randint(3000, 9000))

    assert len(q.entries) <= 10, qid
    for provider in q.results:
        q.results[provider].sort(key=lambda r: r["position"])
        seen = [r["position"] for r in q.results[provider]]
        assert len(seen) == len(set(seen)), (qid, provider, seen)
    q.solution = canonical(sol_url)
    q.query = query
    return q


def generate():
    rng = random.Random(SEED)
    so_ids = rng.sample(range(2_000_000, 9_000_000), 200)
    queries = []
    messages = set()
    pages = {}  # one html per url across the whole fixture file
    for i, key in enumerate(PLAN):
        for _ in range(50):
            q = build_query(f"q{i + 1:02d}", key, rng, so_ids)
            try:
                for name in EVAL_CONFIGS:
                    oracle.rank(q.query, q.entries, set(name.split(",")))
            except oracle.NearTie:
                continue
            if q.query["message"] in messages:
                continue
            if any(pages.get(url, text) != text for url, text in q.pages.items()):
                continue
            order, _ = oracle.rank(q.query, q.entries, {"cnt", "cxt", "ser"})
            if order[0] == q.solution:
                break
        else:
            raise SystemExit(f"could not build {key} for q{i + 1:02d}")
        messages.add(q.query["message"])
        pages.update(q.pages)
        queries.append(q)
    return queries


def outputs(queries):
    fixtures = {"queries": {}, "pages": {}}
    gold = {"queries": []}
    expected = {"configs": {}, "solution_ranks": {}, "report": {"query_count": len(queries), "rows": []}}
    for q in queries:
        fixtures["queries"][q.query["message"]] = {p: r for p, r in q.results.items() if r}
        fixtures["pages"].update(q.pages)
        gold["queries"].append({"query_id": q.qid,
                                "query": {"message": q.query["message"], "raw_stack_trace": q.query["raw_trace"],
                                          "code_context": q.query["code_context"]},
                                "solution_urls": [q.solution]})
    for name in EVAL_CONFIGS:
        enabled = set(name.split(","))
        orders, ranks = {}, {}
        for q in queries:
            order, _ = oracle.rank(q.query, q.entries, enabled)
            orders[q.qid] = order
            ranks[q.qid] = order.index(q.solution) + 1
        expected["configs"][name] = orders
        expected["solution_ranks"][name] = ranks
        row = {"config": name}
        for k in (10, 20):
            hits = [r for r in ranks.values() if r <= k]
            row[f"soln_{k}"] = len(hits)
            row[f"r_{k}"] = sum(hits) / len(hits) if hits else None
        expected["report"]["rows"].append(row)
    return fixtures, gold, expected


def dump(doc):
    return json.dumps(doc, indent=1, sort_keys=True, ensure_ascii=False) + "\n"


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--check", action="store_true", help="verify the files are up to date")
    args = ap.parse_args()
    docs = dict(zip((FIXTURES, GOLD, EXPECTED), outputs(generate())))
    stale = []
    for path, doc in docs.items():
        text = dump(doc)
        if args.check:
            if not path.exists() or path.read_text() != text:
                stale.append(str(path))
        else:
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_text(text)
    if stale:
        raise SystemExit("stale: " + ", ".join(stale))
    rows = docs[EXPECTED]["report"]["rows"]
    for row in rows:
        print(f"{row['config']:<16} soln_10={row['soln_10']:>2} r_10={row['r_10']:.4f}")


if __name__ == "__main__":
    main()
