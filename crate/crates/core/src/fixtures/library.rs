//! Source trees of the libraries the fixture repositories migrate to.

use std::path::Path;

use super::catalog::{COLLECTIONS4, LANG3, TEXT};

pub struct LibraryTree {
    pub dir_name: &'static str,
    pub coordinate: &'static str,
    pub files: &'static [(&'static str, &'static str)],
}

pub const LIBRARIES: &[LibraryTree] = &[
    LibraryTree { dir_name: "commons-lang3", coordinate: LANG3, files: LANG3_FILES },
    LibraryTree { dir_name: "commons-collections4", coordinate: COLLECTIONS4, files: COLLECTIONS4_FILES },
    LibraryTree { dir_name: "commons-text", coordinate: TEXT, files: TEXT_FILES },
];

/// Writes each library as `<dir>/<name>/` with a `coordinate.txt`, the
/// layout accepted as a local library directory.
pub fn write_library_dirs(dir: &Path) -> std::io::Result<()> {
    for lib in LIBRARIES {
        let root = dir.join(lib.dir_name);
        write_tree(lib, &root)?;
        std::fs::write(root.join("coordinate.txt"), format!("{}\n", lib.coordinate))?;
    }
    Ok(())
}

pub fn write_tree(lib: &LibraryTree, root: &Path) -> std::io::Result<()> {
    for (path, text) in lib.files {
        let p = root.join(path);
        if let Some(parent) = p.parent() {
            std::fs::create_dir_all(parent)?;
        }
        std::fs::write(p, text)?;
    }
    Ok(())
}

pub fn library(dir_name: &str) -> Option<&'static LibraryTree> {
    LIBRARIES.iter().find(|l| l.dir_name == dir_name)
}

const LANG3_FILES: &[(&str, &str)] = &[
    (
        "org/apache/commons/lang3/ArrayUtils.java",
        r#"/*
 * Licensed to the Apache Software Foundation (ASF) under one or more
 * contributor license agreements.
 */
package org.apache.commons.lang3;

import java.lang.reflect.Array;
import java.util.Arrays;

/**
 * Operations on arrays, primitive arrays (like {@code int[]}) and
 * primitive wrapper arrays (like {@code Integer[]}).
 */
public class ArrayUtils {

    public static final Object[] EMPTY_OBJECT_ARRAY = {};
    public static final int INDEX_NOT_FOUND = -1;

    public ArrayUtils() {
    }

    public static boolean contains(final Object[] array, final Object objectToFind) {
        return indexOf(array, objectToFind) != INDEX_NOT_FOUND;
    }

    public static boolean contains(final int[] array, final int valueToFind) {
        return indexOf(array, valueToFind) != INDEX_NOT_FOUND;
    }

    public static boolean contains(final char[] array, final char valueToFind) {
        return indexOf(array, valueToFind) != INDEX_NOT_FOUND;
    }

    public static int indexOf(final Object[] array, final Object objectToFind) {
        return indexOf(array, objectToFind, 0);
    }

    public static int indexOf(final Object[] array, final Object objectToFind, int startIndex) {
        if (array == null) {
            return INDEX_NOT_FOUND;
        }
        if (startIndex < 0) {
            startIndex = 0;
        }
        for (int i = startIndex; i < array.length; i++) {
            if (objectToFind == null ? array[i] == null : objectToFind.equals(array[i])) {
                return i;
            }
        }
        return INDEX_NOT_FOUND;
    }

    public static int indexOf(final int[] array, final int valueToFind) {
        if (array == null) {
            return INDEX_NOT_FOUND;
        }
        for (int i = 0; i < array.length; i++) {
            if (valueToFind == array[i]) {
                return i;
            }
        }
        return INDEX_NOT_FOUND;
    }

    public static int indexOf(final char[] array, final char valueToFind) {
        if (array == null) {
            return INDEX_NOT_FOUND;
        }
        for (int i = 0; i < array.length; i++) {
            if (valueToFind == array[i]) {
                return i;
            }
        }
        return INDEX_NOT_FOUND;
    }

    public static void reverse(final int[] array) {
        if (array != null) {
            reverse(array, 0, array.length);
        }
    }

    public static void reverse(final int[] array, final int startIndexInclusive, final int endIndexExclusive) {
        int i = Math.max(startIndexInclusive, 0);
        int j = Math.min(array.length, endIndexExclusive) - 1;
        while (j > i) {
            swapInts(array, i, j);
            j--;
            i++;
        }
    }

    public static void reverse(final Object[] array) {
        if (array == null) {
            return;
        }
        for (int i = 0, j = array.length - 1; j > i; i++, j--) {
            final Object tmp = array[j];
            array[j] = array[i];
            array[i] = tmp;
        }
    }

    public static boolean isEmpty(final Object[] array) {
        return getLength(array) == 0;
    }

    public static <T> T[] nullToEmpty(final T[] array, final Class<T[]> type) {
        if (array == null) {
            return type.cast(Array.newInstance(type.getComponentType(), 0));
        }
        return array;
    }

    public static String toString(final Object array) {
        return array == null ? "{}" : Arrays.deepToString(new Object[] {array});
    }

    public static int getLength(final Object array) {
        return array == null ? 0 : Array.getLength(array);
    }

    private static void swapInts(final int[] array, final int a, final int b) {
        final int tmp = array[a];
        array[a] = array[b];
        array[b] = tmp;
    }
}
"#,
    ),
    (
        "org/apache/commons/lang3/StringUtils.java",
        r#"package org.apache.commons.lang3;

import java.util.Iterator;

/**
 * Operations on {@link java.lang.String} that are {@code null} safe.
 */
public class StringUtils {

    public static final String EMPTY = "";
    public static final int INDEX_NOT_FOUND = -1;
    private static final int PAD_LIMIT = 8192;

    public StringUtils() {
    }

    public static boolean isEmpty(final CharSequence cs) {
        return cs == null || cs.length() == 0;
    }

    public static boolean isBlank(final CharSequence cs) {
        final int strLen = length(cs);
        if (strLen == 0) {
            return true;
        }
        for (int i = 0; i < strLen; i++) {
            if (!Character.isWhitespace(cs.charAt(i))) {
                return false;
            }
        }
        return true;
    }

    public static int length(final CharSequence cs) {
        return cs == null ? 0 : cs.length();
    }

    public static String capitalize(final String str) {
        final int strLen = length(str);
        if (strLen == 0) {
            return str;
        }
        return Character.toTitleCase(str.charAt(0)) + str.substring(1);
    }

    public static String join(final Iterable<?> iterable, final String separator) {
        return iterable == null ? null : join(iterable.iterator(), separator);
    }

    public static String join(final Iterator<?> iterator, final String separator) {
        if (iterator == null) {
            return null;
        }
        final StringBuilder buf = new StringBuilder(256);
        while (iterator.hasNext()) {
            buf.append(iterator.next());
            if (iterator.hasNext() && separator != null) {
                buf.append(separator);
            }
        }
        return buf.toString();
    }

    public static String join(final Object[] array, final char delimiter) {
        if (array == null) {
            return null;
        }
        final StringBuilder buf = new StringBuilder();
        for (int i = 0; i < array.length; i++) {
            if (i > 0) {
                buf.append(delimiter);
            }
            buf.append(array[i]);
        }
        return buf.toString();
    }

    public static String repeat(final String str, final int repeat) {
        if (str == null) {
            return null;
        }
        final StringBuilder buf = new StringBuilder(str.length() * Math.max(repeat, 0));
        for (int i = 0; i < repeat; i++) {
            buf.append(str);
        }
        return buf.toString();
    }

    public static String abbreviate(final String str, final int maxWidth) {
        return abbreviate(str, "...", 0, maxWidth);
    }

    public static String abbreviate(final String str, final String abbrevMarker, int offset, final int maxWidth) {
        if (isEmpty(str) || str.length() <= maxWidth) {
            return str;
        }
        return str.substring(offset, offset + maxWidth - abbrevMarker.length()) + abbrevMarker;
    }

    public static int countMatches(final CharSequence str, final char ch) {
        if (isEmpty(str)) {
            return 0;
        }
        int count = 0;
        for (int i = 0; i < str.length(); i++) {
            if (ch == str.charAt(i)) {
                count++;
            }
        }
        return count;
    }

    public static String leftPad(final String str, final int size) {
        return leftPad(str, size, ' ');
    }

    public static String leftPad(final String str, final int size, final char padChar) {
        if (str == null) {
            return null;
        }
        final int pads = size - str.length();
        if (pads <= 0) {
            return str;
        }
        if (pads > PAD_LIMIT) {
            return leftPad(str, size, String.valueOf(padChar));
        }
        return repeat(String.valueOf(padChar), pads).concat(str);
    }

    public static String leftPad(final String str, final int size, String padStr) {
        if (str == null) {
            return null;
        }
        if (isEmpty(padStr)) {
            padStr = " ";
        }
        final StringBuilder sb = new StringBuilder();
        while (sb.length() + str.length() < size) {
            sb.append(padStr);
        }
        return sb.substring(0, Math.max(0, size - str.length())) + str;
    }

    public static String swapCase(final String str) {
        if (isEmpty(str)) {
            return str;
        }
        final char[] buffer = str.toCharArray();
        for (int i = 0; i < buffer.length; i++) {
            final char ch = buffer[i];
            if (Character.isUpperCase(ch)) {
                buffer[i] = Character.toLowerCase(ch);
            } else if (Character.isLowerCase(ch)) {
                buffer[i] = Character.toUpperCase(ch);
            }
        }
        return new String(buffer);
    }

    public static boolean isNumeric(final CharSequence cs) {
        if (isEmpty(cs)) {
            return false;
        }
        final int sz = cs.length();
        for (int i = 0; i < sz; i++) {
            if (!Character.isDigit(cs.charAt(i))) {
                return false;
            }
        }
        return true;
    }

    /**
     * @deprecated use {@link #abbreviate(String, int)}
     */
    @Deprecated
    public static String truncate(final String str, final int maxWidth) {
        return str == null ? null : str.substring(0, Math.min(str.length(), maxWidth));
    }

    static boolean regionMatches(final CharSequence cs, final int start, final CharSequence other) {
        return cs.toString().startsWith(other.toString(), start);
    }
}
"#,
    ),
    (
        "org/apache/commons/lang3/RandomStringUtils.java",
        r#"package org.apache.commons.lang3;

import java.util.Random;

public class RandomStringUtils {

    private static final Random RANDOM = new Random();

    public static String random(final int count, final boolean letters, final boolean numbers) {
        final StringBuilder sb = new StringBuilder(count);
        while (sb.length() < count) {
            final char ch = (char) (' ' + RANDOM.nextInt(95));
            if (letters && Character.isLetter(ch) || numbers && Character.isDigit(ch) || !letters && !numbers) {
                sb.append(ch);
            }
        }
        return sb.toString();
    }

    public static String randomAlphabetic(final int count) {
        return random(count, true, false);
    }

    public static String randomNumeric(final int count) {
        return random(count, false, true);
    }
}
"#,
    ),
    (
        "org/apache/commons/lang3/ObjectUtils.java",
        r#"package org.apache.commons.lang3;

public class ObjectUtils {

    public static final Null NULL = new Null();

    public static <T> T defaultIfNull(final T object, final T defaultValue) {
        return object != null ? object : defaultValue;
    }

    @SafeVarargs
    public static <T> T firstNonNull(final T... values) {
        if (values != null) {
            for (final T val : values) {
                if (val != null) {
                    return val;
                }
            }
        }
        return null;
    }

    public static boolean isEmpty(final Object object) {
        return object == null || object instanceof CharSequence && ((CharSequence) object).length() == 0;
    }

    public static class Null implements java.io.Serializable {
        private static final long serialVersionUID = 7092611880189329093L;

        Null() {
        }

        private Object readResolve() {
            return NULL;
        }

        public String describe() {
            return "null placeholder";
        }
    }
}
"#,
    ),
    (
        "org/apache/commons/lang3/JavaVersion.java",
        r#"package org.apache.commons.lang3;

public enum JavaVersion {
    JAVA_1_8(1.8f, "1.8"),
    JAVA_11(11.0f, "11"),
    JAVA_RECENT(17.0f, "17") {
        @Override
        public String describe() {
            return "recent";
        }
    };

    private final float value;
    private final String name;

    JavaVersion(final float value, final String name) {
        this.value = value;
        this.name = name;
    }

    public boolean atLeast(final JavaVersion requiredVersion) {
        return this.value >= requiredVersion.value;
    }

    public String describe() {
        return name;
    }

    @Override
    public String toString() {
        return name;
    }
}
"#,
    ),
    (
        "org/apache/commons/lang3/builder/Builder.java",
        r#"package org.apache.commons.lang3.builder;

@FunctionalInterface
public interface Builder<T> {

    T build();

    default Builder<T> self() {
        return this;
    }
}
"#,
    ),
    (
        "org/apache/commons/lang3/builder/ToStringExclude.java",
        r#"package org.apache.commons.lang3.builder;

import java.lang.annotation.ElementType;
import java.lang.annotation.Retention;
import java.lang.annotation.RetentionPolicy;
import java.lang.annotation.Target;

@Retention(RetentionPolicy.RUNTIME)
@Target(ElementType.FIELD)
public @interface ToStringExclude {
    String reason() default "";
}
"#,
    ),
    (
        "org/apache/commons/lang3/math/NumberUtils.java",
        r#"package org.apache.commons.lang3.math;

import org.apache.commons.lang3.StringUtils;

public class NumberUtils {

    public static final Integer INTEGER_ZERO = Integer.valueOf(0);

    public static int toInt(final String str) {
        return toInt(str, 0);
    }

    public static int toInt(final String str, final int defaultValue) {
        if (str == null) {
            return defaultValue;
        }
        try {
            return Integer.parseInt(str);
        } catch (final NumberFormatException nfe) {
            return defaultValue;
        }
    }

    public static boolean isCreatable(final String str) {
        if (StringUtils.isEmpty(str)) {
            return false;
        }
        try {
            new java.math.BigDecimal(str.trim());
            return true;
        } catch (final NumberFormatException e) {
            return isHex(str);
        }
    }

    public static int max(final int... array) {
        validateArray(array);
        int max = array[0];
        for (int j = 1; j < array.length; j++) {
            if (array[j] > max) {
                max = array[j];
            }
        }
        return max;
    }

    public static long max(long a, final long b, final long c) {
        if (b > a) {
            a = b;
        }
        if (c > a) {
            a = c;
        }
        return a;
    }

    private static boolean isHex(final String str) {
        return str.startsWith("0x") || str.startsWith("0X");
    }

    private static void validateArray(final Object array) {
        if (array == null) {
            throw new NullPointerException("array");
        }
    }
}
"#,
    ),
    (
        "module-info.java",
        r#"module org.apache.commons.lang3 {
    exports org.apache.commons.lang3;
    exports org.apache.commons.lang3.builder;
    exports org.apache.commons.lang3.math;
}
"#,
    ),
];

const COLLECTIONS4_FILES: &[(&str, &str)] = &[(
    "org/apache/commons/collections4/CollectionUtils.java",
    r#"package org.apache.commons.collections4;

import java.util.ArrayList;
import java.util.Collection;
import java.util.Collections;
import java.util.LinkedHashSet;
import java.util.List;

public class CollectionUtils {

    private CollectionUtils() {
    }

    public static boolean isEmpty(final Collection<?> coll) {
        return coll == null || coll.isEmpty();
    }

    public static boolean isNotEmpty(final Collection<?> coll) {
        return !isEmpty(coll);
    }

    public static <O> Collection<O> union(final Iterable<? extends O> a, final Iterable<? extends O> b) {
        final LinkedHashSet<O> set = new LinkedHashSet<>();
        for (final O o : a) {
            set.add(o);
        }
        for (final O o : b) {
            set.add(o);
        }
        return new ArrayList<>(set);
    }

    @SafeVarargs
    public static <C> boolean addAll(final Collection<C> collection, final C... elements) {
        return Collections.addAll(collection, elements);
    }

    public static <T> Collection<T> emptyIfNull(final Collection<T> collection) {
        return collection == null ? Collections.<T>emptyList() : collection;
    }

    public static boolean contains(final Collection<?> coll, final Object o) {
        return coll != null && coll.contains(o);
    }

    static <T> List<T> copy(final Collection<T> c) {
        return new ArrayList<>(c);
    }
}
"#,
)];

const TEXT_FILES: &[(&str, &str)] = &[
    (
        "org/apache/commons/text/StringEscapeUtils.java",
        r#"package org.apache.commons.text;

public class StringEscapeUtils {

    public static final String escapeHtml4(final String input) {
        if (input == null) {
            return null;
        }
        final StringBuilder sb = new StringBuilder(input.length());
        for (final char c : input.toCharArray()) {
            switch (c) {
                case '<': sb.append("&lt;"); break;
                case '>': sb.append("&gt;"); break;
                case '&': sb.append("&amp;"); break;
                case '"': sb.append("&quot;"); break;
                default: sb.append(c);
            }
        }
        return sb.toString();
    }

    public static final String unescapeHtml4(final String input) {
        return input == null ? null : input.replace("&lt;", "<").replace("&gt;", ">").replace("&amp;", "&");
    }
}
"#,
    ),
    (
        "org/apache/commons/text/WordUtils.java",
        r#"package org.apache.commons.text;

public class WordUtils {

    public WordUtils() {
    }

    public static String wrap(final String str, final int wrapLength) {
        return wrap(str, wrapLength, null, false);
    }

    public static String wrap(final String str, int wrapLength, String newLineStr, final boolean wrapLongWords) {
        if (str == null) {
            return null;
        }
        if (newLineStr == null) {
            newLineStr = System.lineSeparator();
        }
        if (wrapLength < 1) {
            wrapLength = 1;
        }
        final StringBuilder out = new StringBuilder();
        int col = 0;
        for (final String word : str.split(" ")) {
            if (col > 0 && col + word.length() > wrapLength) {
                out.append(newLineStr);
                col = 0;
            } else if (col > 0) {
                out.append(' ');
                col++;
            }
            out.append(word);
            col += word.length();
        }
        return out.toString();
    }

    public static String capitalizeFully(final String str) {
        return str == null ? null : str.toLowerCase();
    }
}
"#,
    ),
];
