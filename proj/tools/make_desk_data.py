#!/usr/bin/env python3
# SPDX-License-Identifier: Apache-2.0
"""Generates the bundled desk-scale data sets under data/.

Outputs (all JSON-lines):
  data/catalog.jsonl                JDK-style API catalog
  data/desk_corpus.jsonl            200 methods with comments, explicit splits
  data/overfit32.jsonl              32 method/comment pairs, one per template (all train)
  data/synthetic_api/catalog.jsonl  opaque APIs with verb/noun descriptions
  data/synthetic_api/corpus.jsonl   640 methods; comments paraphrase the
                                    description of the best-ranked API
The output is a pure function of SEED.
"""

import argparse
import json
import os
import random

SEED = 20240611


def p(t, n):
    return {"type": t, "name": n}


# (qualified name, params, description)
JDK = [
    ("java.lang.String.startsWith", [p("String", "prefix")], "Tests if this string starts with the specified prefix."),
    ("java.lang.String.endsWith", [p("String", "suffix")], "Tests if this string ends with the specified suffix."),
    ("java.lang.String.trim", [], "Returns a string whose value is this string, with all leading and trailing space removed."),
    ("java.lang.String.isEmpty", [], "Returns true if, and only if, length() is 0."),
    ("java.lang.String.length", [], "Returns the length of this string."),
    ("java.lang.String.toLowerCase", [], "Converts all of the characters in this String to lower case using the rules of the default locale."),
    ("java.lang.String.toUpperCase", [], "Converts all of the characters in this String to upper case using the rules of the default locale."),
    ("java.lang.String.substring", [p("int", "beginIndex"), p("int", "endIndex")], "Returns a string that is a substring of this string."),
    ("java.lang.String.indexOf", [p("String", "str")], "Returns the index within this string of the first occurrence of the specified substring."),
    ("java.lang.String.contains", [p("CharSequence", "s")], "Returns true if and only if this string contains the specified sequence of char values."),
    ("java.lang.String.equals", [p("Object", "anObject")], "Compares this string to the specified object."),
    ("java.lang.String.equalsIgnoreCase", [p("String", "anotherString")], "Compares this String to another String, ignoring case considerations."),
    ("java.lang.String.split", [p("String", "regex")], "Splits this string around matches of the given regular expression."),
    ("java.lang.String.replace", [p("CharSequence", "target"), p("CharSequence", "replacement")], "Replaces each substring of this string that matches the literal target sequence with the specified literal replacement sequence."),
    ("java.lang.String.charAt", [p("int", "index")], "Returns the char value at the specified index."),
    ("java.lang.String.valueOf", [p("Object", "obj")], "Returns the string representation of the Object argument."),
    ("java.lang.String.format", [p("String", "format"), p("Object...", "args")], "Returns a formatted string using the specified format string and arguments."),
    ("java.lang.StringBuilder.append", [p("String", "str")], "Appends the specified string to this character sequence."),
    ("java.lang.StringBuilder.toString", [], "Returns a string representing the data in this sequence."),
    ("java.lang.StringBuilder.reverse", [], "Causes this character sequence to be replaced by the reverse of the sequence."),
    ("java.lang.StringBuilder.setLength", [p("int", "newLength")], "Sets the length of the character sequence."),
    ("java.lang.Integer.parseInt", [p("String", "s")], "Parses the string argument as a signed decimal integer."),
    ("java.lang.Integer.valueOf", [p("int", "i")], "Returns an Integer instance representing the specified int value."),
    ("java.lang.Long.parseLong", [p("String", "s")], "Parses the string argument as a signed decimal long."),
    ("java.lang.Double.parseDouble", [p("String", "s")], "Returns a new double initialized to the value represented by the specified String."),
    ("java.lang.Boolean.parseBoolean", [p("String", "s")], "Parses the string argument as a boolean."),
    ("java.lang.Math.max", [p("int", "a"), p("int", "b")], "Returns the greater of two int values."),
    ("java.lang.Math.min", [p("int", "a"), p("int", "b")], "Returns the smaller of two int values."),
    ("java.lang.Math.abs", [p("int", "a")], "Returns the absolute value of an int value."),
    ("java.lang.Math.sqrt", [p("double", "a")], "Returns the correctly rounded positive square root of a double value."),
    ("java.lang.Math.pow", [p("double", "a"), p("double", "b")], "Returns the value of the first argument raised to the power of the second argument."),
    ("java.lang.Math.round", [p("double", "a")], "Returns the closest long to the argument, with ties rounding to positive infinity."),
    ("java.lang.Math.floor", [p("double", "a")], "Returns the largest double value that is less than or equal to the argument and is equal to a mathematical integer."),
    ("java.lang.System.currentTimeMillis", [], "Returns the current time in milliseconds."),
    ("java.lang.System.nanoTime", [], "Returns the current value of the running Java Virtual Machine's high-resolution time source, in nanoseconds."),
    ("java.lang.System.arraycopy", [p("Object", "src"), p("int", "srcPos"), p("Object", "dest"), p("int", "destPos"), p("int", "length")], "Copies an array from the specified source array, beginning at the specified position, to the specified position of the destination array."),
    ("java.lang.System.getProperty", [p("String", "key")], "Gets the system property indicated by the specified key."),
    ("java.lang.Object.hashCode", [], "Returns a hash code value for the object."),
    ("java.lang.Object.getClass", [], "Returns the runtime class of this Object."),
    ("java.lang.Class.getName", [], "Returns the name of the entity represented by this Class object, as a String."),
    ("java.lang.Thread.sleep", [p("long", "millis")], "Causes the currently executing thread to sleep for the specified number of milliseconds."),
    ("java.lang.Thread.interrupt", [], "Interrupts this thread."),
    ("java.lang.Thread.currentThread", [], "Returns a reference to the currently executing thread object."),
    ("java.lang.Thread.start", [], "Causes this thread to begin execution."),
    ("java.lang.Thread.join", [p("long", "millis")], "Waits at most millis milliseconds for this thread to die."),
    ("java.util.Objects.requireNonNull", [p("Object", "obj"), p("String", "message")], "Checks that the specified object reference is not null and throws a customized NullPointerException if it is."),
    ("java.util.Objects.equals", [p("Object", "a"), p("Object", "b")], "Returns true if the arguments are equal to each other and false otherwise."),
    ("java.util.Objects.hash", [p("Object...", "values")], "Generates a hash code for a sequence of input values."),
    ("java.util.List.add", [p("E", "e")], "Appends the specified element to the end of this list."),
    ("java.util.List.get", [p("int", "index")], "Returns the element at the specified position in this list."),
    ("java.util.List.size", [], "Returns the number of elements in this list."),
    ("java.util.List.remove", [p("int", "index")], "Removes the element at the specified position in this list."),
    ("java.util.List.clear", [], "Removes all of the elements from this list."),
    ("java.util.List.contains", [p("Object", "o")], "Returns true if this list contains the specified element."),
    ("java.util.List.indexOf", [p("Object", "o")], "Returns the index of the first occurrence of the specified element in this list, or -1 if this list does not contain the element."),
    ("java.util.List.addAll", [p("Collection<? extends E>", "c")], "Appends all of the elements in the specified collection to the end of this list, in the order that they are returned by the specified collection's iterator."),
    ("java.util.List.set", [p("int", "index"), p("E", "element")], "Replaces the element at the specified position in this list with the specified element."),
    ("java.util.Map.get", [p("Object", "key")], "Returns the value to which the specified key is mapped, or null if this map contains no mapping for the key."),
    ("java.util.Map.put", [p("K", "key"), p("V", "value")], "Associates the specified value with the specified key in this map."),
    ("java.util.Map.containsKey", [p("Object", "key")], "Returns true if this map contains a mapping for the specified key."),
    ("java.util.Map.remove", [p("Object", "key")], "Removes the mapping for a key from this map if it is present."),
    ("java.util.Map.keySet", [], "Returns a Set view of the keys contained in this map."),
    ("java.util.Map.values", [], "Returns a Collection view of the values contained in this map."),
    ("java.util.Map.entrySet", [], "Returns a Set view of the mappings contained in this map."),
    ("java.util.Map.getOrDefault", [p("Object", "key"), p("V", "defaultValue")], "Returns the value to which the specified key is mapped, or defaultValue if this map contains no mapping for the key."),
    ("java.util.Map.putIfAbsent", [p("K", "key"), p("V", "value")], "If the specified key is not already associated with a value, associates it with the given value and returns null, else returns the current value."),
    ("java.util.Set.add", [p("E", "e")], "Adds the specified element to this set if it is not already present."),
    ("java.util.Set.isEmpty", [], "Returns true if this set contains no elements."),
    ("java.util.Collections.sort", [p("List<T>", "list")], "Sorts the specified list into ascending order, according to the natural ordering of its elements."),
    ("java.util.Collections.unmodifiableList", [p("List<? extends T>", "list")], "Returns an unmodifiable view of the specified list."),
    ("java.util.Collections.emptyList", [], "Returns an empty list (immutable)."),
    ("java.util.Collections.reverse", [p("List<?>", "list")], "Reverses the order of the elements in the specified list."),
    ("java.util.Arrays.asList", [p("T...", "a")], "Returns a fixed-size list backed by the specified array."),
    ("java.util.Arrays.fill", [p("int[]", "a"), p("int", "val")], "Assigns the specified int value to each element of the specified array of ints."),
    ("java.util.Arrays.copyOf", [p("int[]", "original"), p("int", "newLength")], "Copies the specified array, truncating or padding with zeros (if necessary) so the copy has the specified length."),
    ("java.util.Arrays.sort", [p("int[]", "a")], "Sorts the specified array into ascending numerical order."),
    ("java.util.Iterator.hasNext", [], "Returns true if the iteration has more elements."),
    ("java.util.Iterator.next", [], "Returns the next element in the iteration."),
    ("java.util.Iterator.remove", [], "Removes from the underlying collection the last element returned by this iterator."),
    ("java.util.Optional.isPresent", [], "If a value is present, returns true, otherwise false."),
    ("java.util.Optional.orElse", [p("T", "other")], "If a value is present, returns the value, otherwise returns other."),
    ("java.util.Optional.of", [p("T", "value")], "Returns an Optional describing the given non-null value."),
    ("java.util.Optional.empty", [], "Returns an empty Optional instance."),
    ("java.io.Writer.write", [p("String", "str")], "Writes a string."),
    ("java.io.Writer.write", [p("char[]", "cbuf")], "Writes an array of characters."),
    ("java.io.Writer.write", [p("String", "str"), p("int", "off"), p("int", "len")], "Writes a portion of a string."),
    ("java.io.Writer.flush", [], "Flushes the stream."),
    ("java.io.Writer.close", [], "Closes the stream, flushing it first."),
    ("java.io.Reader.read", [p("char[]", "cbuf")], "Reads characters into an array."),
    ("java.io.BufferedReader.readLine", [], "Reads a line of text."),
    ("java.io.InputStream.read", [p("byte[]", "b")], "Reads some number of bytes from the input stream and stores them into the buffer array b."),
    ("java.io.InputStream.available", [], "Returns an estimate of the number of bytes that can be read from this input stream without blocking."),
    ("java.io.OutputStream.write", [p("byte[]", "b"), p("int", "off"), p("int", "len")], "Writes len bytes from the specified byte array starting at offset off to this output stream."),
    ("java.io.File.exists", [], "Tests whether the file or directory denoted by this abstract pathname exists."),
    ("java.io.File.delete", [], "Deletes the file or directory denoted by this abstract pathname."),
    ("java.io.File.mkdirs", [], "Creates the directory named by this abstract pathname, including any necessary but nonexistent parent directories."),
    ("java.io.File.getName", [], "Returns the name of the file or directory denoted by this abstract pathname."),
    ("java.io.File.isDirectory", [], "Tests whether the file denoted by this abstract pathname is a directory."),
    ("java.io.File.listFiles", [], "Returns an array of abstract pathnames denoting the files in the directory denoted by this abstract pathname."),
    ("java.io.File.createNewFile", [], "Atomically creates a new, empty file named by this abstract pathname if and only if a file with this name does not yet exist."),
    ("java.util.concurrent.CountDownLatch.await", [p("long", "timeout"), p("TimeUnit", "unit")], "Causes the current thread to wait until the latch has counted down to zero, unless the thread is interrupted, or the specified waiting time elapses."),
    ("java.util.concurrent.CountDownLatch.getCount", [], "Returns the current count."),
    ("java.util.concurrent.CountDownLatch.countDown", [], "Decrements the count of the latch, releasing all waiting threads if the count reaches zero."),
    ("io.reactivex.disposables.Disposable.dispose", [], "Dispose the resource, the operation should be idempotent."),
    ("java.util.concurrent.locks.Lock.lock", [], "Acquires the lock."),
    ("java.util.concurrent.locks.Lock.unlock", [], "Releases the lock."),
    ("java.util.concurrent.ExecutorService.shutdown", [], "Initiates an orderly shutdown in which previously submitted tasks are executed, but no new tasks will be accepted."),
    ("java.util.concurrent.ExecutorService.submit", [p("Runnable", "task")], "Submits a Runnable task for execution and returns a Future representing that task."),
    ("java.util.concurrent.atomic.AtomicInteger.incrementAndGet", [], "Atomically increments the current value."),
    ("java.util.concurrent.atomic.AtomicInteger.get", [], "Returns the current value."),
    ("java.util.logging.Logger.info", [p("String", "msg")], "Log an INFO message."),
    ("java.util.logging.Logger.warning", [p("String", "msg")], "Log a WARNING message."),
    ("java.util.regex.Pattern.compile", [p("String", "regex")], "Compiles the given regular expression into a pattern."),
    ("java.util.regex.Pattern.matcher", [p("CharSequence", "input")], "Creates a matcher that will match the given input against this pattern."),
    ("java.util.regex.Matcher.matches", [], "Attempts to match the entire region against the pattern."),
    ("java.util.regex.Matcher.find", [], "Attempts to find the next subsequence of the input sequence that matches the pattern."),
    ("java.nio.ByteBuffer.allocate", [p("int", "capacity")], "Allocates a new byte buffer."),
    ("java.nio.ByteBuffer.flip", [], "Flips this buffer."),
    ("java.nio.ByteBuffer.remaining", [], "Returns the number of elements between the current position and the limit."),
]


def jdk_catalog():
    out = []
    for qn, params, desc in JDK:
        out.append({"qualified_name": qn, "params": params, "description": desc})
    return out


# ---- desk corpus ------------------------------------------------------------

NOUNS = ["name", "path", "value", "key", "label", "token", "title", "prefix", "header", "field",
         "entry", "message", "url", "query", "tag", "code", "text", "line", "word", "id"]
HOLDERS = ["items", "names", "entries", "values", "records", "tasks", "users", "nodes", "files", "events"]
CAPS = {n: n[0].upper() + n[1:] for n in NOUNS + HOLDERS}


def cap(w):
    return w[0].upper() + w[1:]


def t_starts(rng):
    n = rng.choice(NOUNS)
    code = (f"public boolean has{cap(n)}Prefix(String {n}, String prefix) {{\n"
            f"    if ({n} == null) {{\n        return false;\n    }}\n"
            f"    return {n}.trim().startsWith(prefix);\n}}")
    return code, f"checks whether the {n} starts with the given prefix"


def t_ends(rng):
    n = rng.choice(NOUNS)
    code = (f"public boolean is{cap(n)}Suffix(String {n}, String suffix) {{\n"
            f"    return {n} != null && {n}.endsWith(suffix);\n}}")
    return code, f"checks whether the {n} ends with the given suffix"


def t_parse_int(rng):
    n = rng.choice(NOUNS)
    code = (f"public int parse{cap(n)}(String {n}, int fallback) {{\n"
            f"    try {{\n        return Integer.parseInt({n}.trim());\n"
            f"    }} catch (NumberFormatException e) {{\n        return fallback;\n    }}\n}}")
    return code, f"parses the {n} as an integer or returns the fallback"


def t_parse_long(rng):
    n = rng.choice(NOUNS)
    code = (f"public long read{cap(n)}Long(String {n}) {{\n"
            f"    if ({n} == null || {n}.isEmpty()) {{\n        return 0L;\n    }}\n"
            f"    return Long.parseLong({n});\n}}")
    return code, f"reads the {n} as a long value"


def t_list_add(rng):
    h = rng.choice(HOLDERS)
    code = (f"public void add{cap(h)}(List<String> {h}, String item) {{\n"
            f"    if (!{h}.contains(item)) {{\n        {h}.add(item);\n    }}\n}}")
    return code, f"adds the item to {h} if it is not already present"


def t_list_clear(rng):
    h = rng.choice(HOLDERS)
    code = (f"public void reset{cap(h)}() {{\n    synchronized (lock) {{\n"
            f"        this.{h}.clear();\n        this.count = 0;\n    }}\n}}")
    return code, f"removes all {h} and resets the count"


def t_list_size(rng):
    h = rng.choice(HOLDERS)
    code = f"public int count{cap(h)}() {{\n    return {h} == null ? 0 : {h}.size();\n}}"
    return code, f"returns the number of {h}"


def t_list_get(rng):
    h = rng.choice(HOLDERS)
    code = (f"public String first{cap(h)}(List<String> {h}) {{\n"
            f"    if ({h}.isEmpty()) {{\n        return null;\n    }}\n    return {h}.get(0);\n}}")
    return code, f"returns the first of the {h} or null if empty"


def t_map_get(rng):
    n = rng.choice(NOUNS)
    code = (f"public String lookup{cap(n)}(Map<String, String> map, String {n}) {{\n"
            f"    if (!map.containsKey({n})) {{\n        return \"\";\n    }}\n"
            f"    return map.get({n});\n}}")
    return code, f"looks up the {n} in the map"


def t_map_put(rng):
    n = rng.choice(NOUNS)
    code = (f"public void register{cap(n)}(String {n}, Object value) {{\n"
            f"    Objects.requireNonNull(value, \"value\");\n    registry.put({n}, value);\n}}")
    return code, f"registers a value under the given {n}"


def t_map_remove(rng):
    n = rng.choice(NOUNS)
    code = (f"public boolean forget{cap(n)}(String {n}) {{\n"
            f"    return cache.remove({n}) != null;\n}}")
    return code, f"removes the cached {n}"


def t_writer(rng):
    n = rng.choice(NOUNS)
    code = (f"public void write{cap(n)}(Writer writer, String {n}) throws IOException {{\n"
            f"    writer.write({n});\n    writer.write(\"\\n\");\n    writer.flush();\n}}")
    return code, f"writes the {n} followed by a newline and flushes the writer"


def t_close(rng):
    code = ("public void closeQuietly(Writer writer) {\n    if (writer == null) {\n        return;\n    }\n"
            "    try {\n        writer.close();\n    } catch (IOException ignored) {\n    }\n}")
    return code, "closes the writer ignoring any exception"


def t_file_exists(rng):
    n = rng.choice(["config", "cache", "output", "input", "log", "data"])
    code = (f"public boolean has{cap(n)}File(File dir, String name) {{\n"
            f"    File file = new File(dir, name);\n    return file.exists() && !file.isDirectory();\n}}")
    return code, f"checks whether the {n} file exists in the directory"


def t_mkdirs(rng):
    n = rng.choice(["config", "cache", "output", "temp", "log", "data"])
    code = (f"public File ensure{cap(n)}Dir(File root) {{\n    File dir = new File(root, \"{n}\");\n"
            f"    if (!dir.exists()) {{\n        dir.mkdirs();\n    }}\n    return dir;\n}}")
    return code, f"creates the {n} directory if it does not exist"


def t_delete(rng):
    n = rng.choice(["temp", "cache", "lock", "backup", "old"])
    code = (f"public int delete{cap(n)}Files(File dir) {{\n    int deleted = 0;\n"
            f"    for (File f : dir.listFiles()) {{\n        if (f.getName().endsWith(\".{n}\") && f.delete()) {{\n"
            f"            deleted++;\n        }}\n    }}\n    return deleted;\n}}")
    return code, f"deletes all {n} files in the directory and returns the count"


def t_sleep(rng):
    code = ("public void pause(long millis) {\n    try {\n        Thread.sleep(millis);\n"
            "    } catch (InterruptedException e) {\n        Thread.currentThread().interrupt();\n    }\n}")
    return code, "sleeps for the given time and restores the interrupt flag"


def t_elapsed(rng):
    n = rng.choice(["task", "request", "query", "job", "step"])
    code = (f"public long elapsed{cap(n)}Time(long start) {{\n"
            f"    return System.currentTimeMillis() - start;\n}}")
    return code, f"returns the elapsed {n} time in milliseconds"


def t_max(rng):
    n = rng.choice(["width", "height", "size", "depth", "limit", "offset"])
    code = (f"public int clamp{cap(n)}(int {n}, int low, int high) {{\n"
            f"    return Math.max(low, Math.min(high, {n}));\n}}")
    return code, f"clamps the {n} between the lower and upper bound"


def t_sqrt(rng):
    code = ("public double distance(double x, double y) {\n"
            "    return Math.sqrt(Math.pow(x, 2) + Math.pow(y, 2));\n}")
    return code, "computes the euclidean distance from the origin"


def t_lower(rng):
    n = rng.choice(NOUNS)
    code = (f"public String normalize{cap(n)}(String {n}) {{\n"
            f"    return {n} == null ? \"\" : {n}.trim().toLowerCase();\n}}")
    return code, f"normalizes the {n} to trimmed lower case"


def t_builder(rng):
    h = rng.choice(HOLDERS)
    code = (f"public String join{cap(h)}(List<String> {h}, String sep) {{\n"
            f"    StringBuilder sb = new StringBuilder();\n    for (int i = 0; i < {h}.size(); i++) {{\n"
            f"        if (i > 0) {{\n            sb.append(sep);\n        }}\n        sb.append({h}.get(i));\n    }}\n"
            f"    return sb.toString();\n}}")
    return code, f"joins the {h} with the given separator"


def t_sort(rng):
    h = rng.choice(HOLDERS)
    code = (f"public List<String> sorted{cap(h)}(List<String> {h}) {{\n"
            f"    List<String> copy = new ArrayList<>({h});\n    Collections.sort(copy);\n"
            f"    return Collections.unmodifiableList(copy);\n}}")
    return code, f"returns a sorted read only copy of the {h}"


def t_lock(rng):
    n = rng.choice(["counter", "total", "version", "state", "index"])
    code = (f"public void increment{cap(n)}() {{\n    lock.lock();\n    try {{\n"
            f"        {n}++;\n    }} finally {{\n        lock.unlock();\n    }}\n}}")
    return code, f"increments the {n} while holding the lock"


def t_regex(rng):
    n = rng.choice(["email", "phone", "date", "number", "word"])
    code = (f"public boolean isValid{cap(n)}(String input, String regex) {{\n"
            f"    return Pattern.compile(regex).matcher(input).matches();\n}}")
    return code, f"checks whether the input is a valid {n}"


def t_optional(rng):
    n = rng.choice(NOUNS)
    code = (f"public String {n}OrDefault(Optional<String> {n}, String fallback) {{\n"
            f"    return {n}.isPresent() ? {n}.get() : fallback;\n}}")
    return code, f"returns the {n} or the fallback when absent"


def t_logger(rng):
    n = rng.choice(["start", "stop", "error", "retry", "timeout"])
    code = (f"public void log{cap(n)}(String detail) {{\n"
            f"    logger.info(String.format(\"{n}: %s\", detail));\n}}")
    return code, f"logs a {n} message with the given detail"


def t_executor(rng):
    code = ("public void stopWorkers() {\n    if (executor != null) {\n        executor.shutdown();\n"
            "        executor = null;\n    }\n}")
    return code, "shuts down the worker executor"


def t_iterator(rng):
    h = rng.choice(HOLDERS)
    code = (f"public void removeEmpty{cap(h)}(List<String> {h}) {{\n    Iterator<String> it = {h}.iterator();\n"
            f"    while (it.hasNext()) {{\n        if (it.next().isEmpty()) {{\n            it.remove();\n        }}\n    }}\n}}")
    return code, f"removes empty strings from the {h}"


def t_hash(rng):
    a, b = rng.sample(NOUNS, 2)
    code = f"public int hashCode() {{\n    return Objects.hash({a}, {b});\n}}"
    return code, f"computes the hash code from {a} and {b}"


def t_equals(rng):
    n = rng.choice(NOUNS)
    code = (f"public boolean same{cap(n)}(Item other) {{\n"
            f"    return other != null && Objects.equals(this.{n}, other.{n});\n}}")
    return code, f"checks whether the other item has the same {n}"


def t_buffer(rng):
    code = ("public ByteBuffer wrapBytes(byte[] data) {\n    ByteBuffer buffer = ByteBuffer.allocate(data.length);\n"
            "    buffer.put(data);\n    buffer.flip();\n    return buffer;\n}")
    return code, "copies the bytes into a new buffer ready for reading"


def t_await(rng):
    code = ("public boolean await(long timeout, TimeUnit unit) throws InterruptedException {\n"
            "    if (latch.getCount() == 0) {\n        return true;\n    }\n"
            "    boolean done = latch.await(timeout, unit);\n    if (!done) {\n        disposable.dispose();\n    }\n"
            "    return done;\n}")
    return code, "waits until the latch reaches zero or the timeout elapses"


TEMPLATES = [t_starts, t_ends, t_parse_int, t_parse_long, t_list_add, t_list_clear, t_list_size, t_list_get,
             t_map_get, t_map_put, t_map_remove, t_writer, t_close, t_file_exists, t_mkdirs, t_delete, t_sleep,
             t_elapsed, t_max, t_sqrt, t_lower, t_builder, t_sort, t_lock, t_regex, t_optional, t_logger,
             t_executor, t_iterator, t_hash, t_equals, t_buffer, t_await]


def unique_methods(rng, count, prefix):
    seen = set()
    out = []
    while len(out) < count:
        code, comment = rng.choice(TEMPLATES)(rng)
        if code in seen:
            continue
        seen.add(code)
        out.append({"id": f"{prefix}{len(out):04d}", "code": code, "comment": comment})
    return out


def desk_corpus(rng):
    methods = unique_methods(rng, 200, "desk")
    for i, m in enumerate(methods):
        m["split"] = "train" if i < 160 else ("validation" if i < 180 else "test")
    return methods


def overfit_set(rng):
    out = []
    for template in rng.sample(TEMPLATES, 32):
        code, comment = template(rng)
        out.append({"id": f"fit{len(out):02d}", "code": code, "comment": comment, "split": "train"})
    return out


# ---- synthetic API-context corpus ---------------------------------------------

VERBS = [("compute", "computes"), ("validate", "validates"), ("remove", "removes"), ("encode", "encodes"),
         ("merge", "merges"), ("refresh", "refreshes"), ("publish", "publishes"), ("archive", "archives"),
         ("compress", "compresses"), ("schedule", "schedules"), ("render", "renders"), ("lock", "locks")]
SYN_NOUNS = ["checksum", "session", "invoice", "thumbnail", "manifest", "ledger", "snapshot", "profile",
             "playlist", "certificate", "inventory", "timetable"]
DESC_TEMPLATES = ["{V} the {n} held by this instance.", "{V} the current {n}.", "{V} the {n} for the caller."]
LETTERS = "bcdfghjklmnpqrstvwxz"


def opaque(rng, used, length):
    while True:
        s = "".join(rng.choice(LETTERS) for _ in range(length))
        if s not in used:
            used.add(s)
            return s


def synthetic(rng):
    used = set()
    types = [cap(opaque(rng, used, 4)) for _ in range(10)]
    combos = [(v, n) for v in range(len(VERBS)) for n in range(len(SYN_NOUNS))]
    rng.shuffle(combos)
    # Held-out combinations: every verb and noun still appears in training.
    held = []
    vcount = {}
    ncount = {}
    for v, n in combos:
        if len(held) == 20:
            break
        if vcount.get(v, 0) < 2 and ncount.get(n, 0) < 2:
            held.append((v, n))
            vcount[v] = vcount.get(v, 0) + 1
            ncount[n] = ncount.get(n, 0) + 1
    held_set = set(held)
    train_combos = [c for c in combos if c not in held_set]

    catalog = []
    apis = {}

    def make_api(combo, arity):
        name = opaque(rng, used, 6)
        params = [p(rng.choice(types), opaque(rng, used, 3)) for _ in range(arity)]
        v, n = combo
        desc = rng.choice(DESC_TEMPLATES).format(V=cap(VERBS[v][1]), n=SYN_NOUNS[n])
        entry = {"qualified_name": f"syn.{cap(opaque(rng, used, 5))}.{name}", "params": params, "description": desc}
        catalog.append(entry)
        return entry

    for c in combos:
        apis[c] = [make_api(c, rng.randint(1, 3)) for _ in range(2)]

    def method(idx, split, combo):
        top = rng.choice(apis[combo])
        sig = [(prm["type"], opaque(rng, used, 3)) for prm in top["params"]]
        pool = train_combos if split == "train" else combos
        distractors = []
        while len(distractors) < 2:
            d = rng.choice(pool)
            if d == combo:
                continue
            cand = rng.choice(apis[d])
            top_types = sorted(t for t, _ in sig)
            if sorted(x["type"] for x in cand["params"]) == top_types:
                continue
            distractors.append(cand)
        calls = [top] + distractors
        rng.shuffle(calls)
        body = []
        for k, api in enumerate(calls):
            name = api["qualified_name"].rsplit(".", 1)[1]
            args = ", ".join(rng.choice([n for _, n in sig] + ["null"]) for _ in api["params"])
            body.append(f"    Object v{k} = {opaque(rng, used, 4)}.{name}({args});")
        params = ", ".join(f"{t} {n}" for t, n in sig)
        code = (f"public Object {opaque(rng, used, 7)}({params}) {{\n" + "\n".join(body) +
                f"\n    return v{rng.randint(0, len(calls) - 1)};\n}}")
        v, n = combo
        comment = f"{VERBS[v][0]} the {SYN_NOUNS[n]}"
        return {"id": f"syn{idx:04d}", "code": code, "comment": comment, "split": split}

    corpus = []
    for i in range(520):
        corpus.append(method(len(corpus), "train", rng.choice(train_combos)))
    for i in range(40):
        corpus.append(method(len(corpus), "validation", rng.choice(train_combos)))
    for i in range(80):
        corpus.append(method(len(corpus), "test", held[i % len(held)]))
    return catalog, corpus


def write_jsonl(path, rows):
    with open(path, "w", encoding="utf-8") as f:
        for r in rows:
            f.write(json.dumps(r, ensure_ascii=False, sort_keys=True) + "\n")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default=os.path.join(os.path.dirname(__file__), "..", "data"))
    args = ap.parse_args()
    os.makedirs(os.path.join(args.out, "synthetic_api"), exist_ok=True)
    write_jsonl(os.path.join(args.out, "catalog.jsonl"), jdk_catalog())
    write_jsonl(os.path.join(args.out, "desk_corpus.jsonl"), desk_corpus(random.Random(SEED)))
    write_jsonl(os.path.join(args.out, "overfit32.jsonl"), overfit_set(random.Random(SEED + 1)))
    catalog, corpus = synthetic(random.Random(SEED + 2))
    write_jsonl(os.path.join(args.out, "synthetic_api", "catalog.jsonl"), catalog)
    write_jsonl(os.path.join(args.out, "synthetic_api", "corpus.jsonl"), corpus)


if __name__ == "__main__":
    main()
